//! Two-phase revised simplex with bounded variables.
//!
//! Every row is turned into an equality by a logical column: a bounded slack
//! for inequality rows, or an artificial when the starting point violates the
//! row. Phase 1 minimizes the sum of artificials; phase 2 keeps any artificial
//! still basic fixed at zero and optimizes the real objective.

use log::{debug, info};
use serde::{Deserialize, Serialize};

use super::lu::BasisFactor;
use super::pivot::{select_entering, Candidate, NonbasicPosition, PivotPolicy, PivotRule};
use super::problem::{LinearProgram, Relation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Pivot cap; `None` means `50 · (n + m)`.
    pub max_iterations: Option<usize>,
    /// Final row residual acceptance, scaled by `1 + ‖b‖∞`.
    pub feasibility_tolerance: f64,
    /// Bound tolerance used inside the ratio test and phase-1 exit, scaled by `1 + ‖b‖∞`.
    pub primal_tolerance: f64,
    pub optimality_tolerance: f64,
    pub pivot_tolerance: f64,
    pub refactor_interval: usize,
    pub stall_window: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iterations: None,
            feasibility_tolerance: 1e-6,
            primal_tolerance: 1e-9,
            optimality_tolerance: 1e-9,
            pivot_tolerance: 1e-9,
            refactor_interval: 100,
            stall_window: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    /// The factorization became singular or the final point failed the
    /// residual check. Never reported as optimal.
    NumericalBreakdown,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::IterationLimit => "iteration_limit",
            SolveStatus::NumericalBreakdown => "numerical_breakdown",
        }
    }
}

/// Phase-1 evidence that no feasible point exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Infeasibility {
    /// Minimum total violation found by phase 1; a lower bound on how far
    /// any point is from satisfying all rows.
    pub total: f64,
    /// Rows that still carry an artificial, worst first.
    pub rows: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub status: SolveStatus,
    pub values: Vec<f64>,
    pub objective: f64,
    /// Row multipliers of the final basis (phase-2 costs).
    pub duals: Vec<f64>,
    pub max_residual: f64,
    pub max_bound_violation: f64,
    /// Largest dual-feasibility violation among nonbasic columns at exit.
    pub max_dual_infeasibility: f64,
    pub iterations: usize,
    pub phase1_iterations: usize,
    pub bland_switches: usize,
    pub infeasibility: Option<Infeasibility>,
    pub message: Option<String>,
}

impl Solution {
    fn empty(status: SolveStatus, n: usize, m: usize) -> Self {
        Solution {
            status,
            values: vec![0.0; n],
            objective: 0.0,
            duals: vec![0.0; m],
            max_residual: 0.0,
            max_bound_violation: 0.0,
            max_dual_infeasibility: 0.0,
            iterations: 0,
            phase1_iterations: 0,
            bland_switches: 0,
            infeasibility: None,
            message: None,
        }
    }
}

/// Outcome of phase 1 alone.
#[derive(Debug, Clone, PartialEq)]
pub enum Phase1Outcome {
    Feasible { values: Vec<f64>, iterations: usize },
    Infeasible { infeasibility: Infeasibility, iterations: usize },
    /// Iteration cap or numerical trouble before phase 1 finished.
    Incomplete { status: SolveStatus, iterations: usize },
}

/// Solves `lp` to optimality or to a definite non-optimal status.
pub fn solve(lp: &LinearProgram, options: &SolverOptions) -> Solution {
    let (n, m) = (lp.num_cols(), lp.num_rows());
    if let Err(e) = lp.check() {
        let mut s = Solution::empty(SolveStatus::NumericalBreakdown, n, m);
        s.message = Some(e.to_string());
        return s;
    }
    if let Some(s) = crossed_bounds(lp) {
        return s;
    }
    let mut engine = match Engine::new(lp, options) {
        Ok(e) => e,
        Err(s) => return s,
    };
    engine.run()
}

/// Runs phase 1 only.
pub fn phase1(lp: &LinearProgram, options: &SolverOptions) -> Phase1Outcome {
    if lp.check().is_err() {
        return Phase1Outcome::Incomplete { status: SolveStatus::NumericalBreakdown, iterations: 0 };
    }
    if let Some(s) = crossed_bounds(lp) {
        return Phase1Outcome::Infeasible { infeasibility: s.infeasibility.unwrap(), iterations: 0 };
    }
    let mut engine = match Engine::new(lp, options) {
        Ok(e) => e,
        Err(s) => return Phase1Outcome::Incomplete { status: s.status, iterations: 0 },
    };
    match engine.phase_one() {
        PhaseEnd::Optimal => {
            let iterations = engine.iterations;
            match engine.phase_one_verdict() {
                Some(infeasibility) => Phase1Outcome::Infeasible { infeasibility, iterations },
                None => Phase1Outcome::Feasible { values: engine.x[..engine.n].to_vec(), iterations },
            }
        }
        PhaseEnd::Unbounded => Phase1Outcome::Incomplete {
            status: SolveStatus::NumericalBreakdown,
            iterations: engine.iterations,
        },
        PhaseEnd::Stopped(status) => Phase1Outcome::Incomplete { status, iterations: engine.iterations },
    }
}

fn crossed_bounds(lp: &LinearProgram) -> Option<Solution> {
    let mut worst = 0.0f64;
    for j in 0..lp.num_cols() {
        worst = worst.max(lp.lower()[j] - lp.upper()[j]);
    }
    if worst > 0.0 {
        let mut s = Solution::empty(SolveStatus::Infeasible, lp.num_cols(), lp.num_rows());
        s.infeasibility = Some(Infeasibility { total: worst, rows: Vec::new() });
        s.message = Some("a column has lower bound above upper bound".into());
        Some(s)
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
    Free,
    /// Artificial that left the basis; never re-enters.
    Removed,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
    Stopped(SolveStatus),
}

struct Engine<'a> {
    lp: &'a LinearProgram,
    opts: &'a SolverOptions,
    n: usize,
    m: usize,
    /// Logical columns (slacks then artificials), each a single unit entry.
    logical: Vec<[(usize, f64); 1]>,
    first_artificial: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    state: Vec<VarState>,
    x: Vec<f64>,
    basis: Vec<usize>,
    factor: BasisFactor,
    b: Vec<f64>,
    policy: PivotPolicy,
    iterations: usize,
    max_iterations: usize,
    primal_tol: f64,
    last_dual_infeasibility: f64,
}

impl<'a> Engine<'a> {
    fn new(lp: &'a LinearProgram, opts: &'a SolverOptions) -> Result<Self, Solution> {
        let (n, m) = (lp.num_cols(), lp.num_rows());
        let mut lower = lp.lower().to_vec();
        let mut upper = lp.upper().to_vec();
        let mut x = vec![0.0; n];
        let mut state = vec![VarState::AtLower; n];
        for j in 0..n {
            if lower[j].is_finite() {
                x[j] = lower[j];
                state[j] = VarState::AtLower;
            } else if upper[j].is_finite() {
                x[j] = upper[j];
                state[j] = VarState::AtUpper;
            } else {
                state[j] = VarState::Free;
            }
        }
        // residual of each row at the starting point
        let mut r = lp.rhs().to_vec();
        for (j, col) in lp.columns().iter().enumerate() {
            if x[j] != 0.0 {
                for &(i, v) in col {
                    r[i] -= v * x[j];
                }
            }
        }

        let mut logical = Vec::new();
        let mut basis = vec![usize::MAX; m];
        let mut cost = lp.objective().to_vec();
        let mut needs_artificial = Vec::new();
        for (i, rel) in lp.relations().iter().enumerate() {
            let slack = match rel {
                Relation::Eq => None,
                Relation::Le => Some(1.0),
                Relation::Ge => Some(-1.0),
            };
            if let Some(sign) = slack {
                let j = n + logical.len();
                logical.push([(i, sign)]);
                lower.push(0.0);
                upper.push(f64::INFINITY);
                cost.push(0.0);
                let value = sign * r[i];
                if value >= 0.0 {
                    x.push(value);
                    state.push(VarState::Basic);
                    basis[i] = j;
                } else {
                    x.push(0.0);
                    state.push(VarState::AtLower);
                    needs_artificial.push(i);
                }
            } else {
                needs_artificial.push(i);
            }
        }
        let first_artificial = n + logical.len();
        for &i in &needs_artificial {
            let sign = if r[i] >= 0.0 { 1.0 } else { -1.0 };
            let j = n + logical.len();
            logical.push([(i, sign)]);
            lower.push(0.0);
            upper.push(f64::INFINITY);
            cost.push(0.0);
            x.push(r[i].abs());
            state.push(VarState::Basic);
            basis[i] = j;
        }

        let cols: Vec<&[(usize, f64)]> = basis.iter().map(|&j| &logical[j - n][..]).collect();
        let factor = match BasisFactor::factorize(m, &cols) {
            Ok(f) => f,
            Err(e) => {
                let mut s = Solution::empty(SolveStatus::NumericalBreakdown, n, m);
                s.message = Some(e.to_string());
                return Err(s);
            }
        };
        let total = n + m;
        let max_iterations = opts.max_iterations.unwrap_or(50 * total.max(1));
        let primal_tol = opts.primal_tolerance * (1.0 + lp.rhs_norm_inf());
        Ok(Engine {
            lp,
            opts,
            n,
            m,
            logical,
            first_artificial,
            lower,
            upper,
            cost,
            state,
            x,
            basis,
            factor,
            b: lp.rhs().to_vec(),
            policy: PivotPolicy::new(opts.stall_window),
            iterations: 0,
            max_iterations,
            primal_tol,
            last_dual_infeasibility: 0.0,
        })
    }

    fn num_vars(&self) -> usize {
        self.n + self.logical.len()
    }

    fn column(&self, j: usize) -> &[(usize, f64)] {
        if j < self.n {
            self.lp.column(j)
        } else {
            &self.logical[j - self.n]
        }
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.first_artificial
    }

    fn run(&mut self) -> Solution {
        let (n, m) = (self.n, self.m);
        let phase1_result = self.phase_one();
        let phase1_iterations = self.iterations;
        match phase1_result {
            PhaseEnd::Optimal => {}
            PhaseEnd::Unbounded => return self.finish(SolveStatus::NumericalBreakdown, phase1_iterations),
            PhaseEnd::Stopped(status) => return self.finish(status, phase1_iterations),
        }
        if let Some(inf) = self.phase_one_verdict() {
            info!("phase 1 ended infeasible: total violation {:.3e}", inf.total);
            let mut s = Solution::empty(SolveStatus::Infeasible, n, m);
            s.iterations = self.iterations;
            s.phase1_iterations = phase1_iterations;
            s.bland_switches = self.policy.bland_switches();
            s.values = self.x[..n].to_vec();
            s.infeasibility = Some(inf);
            return s;
        }
        debug!("phase 1 done after {phase1_iterations} iterations");

        // phase 2: artificials still basic are pinned at zero
        for j in self.first_artificial..self.num_vars() {
            self.cost[j] = 0.0;
            match self.state[j] {
                VarState::Basic => self.upper[j] = 0.0,
                _ => self.state[j] = VarState::Removed,
            }
        }
        self.cost[..n].copy_from_slice(self.lp.objective());
        for j in n..self.first_artificial {
            self.cost[j] = 0.0;
        }
        self.policy = PivotPolicy::new(self.opts.stall_window);
        let end = self.iterate();
        let status = match end {
            PhaseEnd::Optimal => SolveStatus::Optimal,
            PhaseEnd::Unbounded => SolveStatus::Unbounded,
            PhaseEnd::Stopped(s) => s,
        };
        self.finish(status, phase1_iterations)
    }

    fn phase_one(&mut self) -> PhaseEnd {
        for j in 0..self.num_vars() {
            self.cost[j] = if self.is_artificial(j) { 1.0 } else { 0.0 };
        }
        if self.artificial_sum() <= self.primal_tol {
            return PhaseEnd::Optimal;
        }
        self.iterate()
    }

    fn artificial_sum(&self) -> f64 {
        (self.first_artificial..self.num_vars())
            .filter(|&j| self.state[j] == VarState::Basic)
            .map(|j| self.x[j].max(0.0))
            .sum()
    }

    fn phase_one_verdict(&self) -> Option<Infeasibility> {
        let total = self.artificial_sum();
        if total <= self.primal_tol {
            return None;
        }
        let mut rows: Vec<(usize, f64)> = (self.first_artificial..self.num_vars())
            .filter(|&j| self.state[j] == VarState::Basic && self.x[j] > self.primal_tol)
            .map(|j| (self.logical[j - self.n][0].0, self.x[j]))
            .collect();
        rows.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        Some(Infeasibility { total, rows })
    }

    fn duals(&self) -> Vec<f64> {
        let mut y: Vec<f64> = self.basis.iter().map(|&j| self.cost[j]).collect();
        self.factor.btran(&mut y);
        y
    }

    fn reduced_cost(&self, j: usize, y: &[f64]) -> f64 {
        let mut d = self.cost[j];
        for &(i, v) in self.column(j) {
            d -= y[i] * v;
        }
        d
    }

    fn candidates<'s>(&'s self, y: &'s [f64]) -> impl Iterator<Item = Candidate> + 's {
        (0..self.num_vars()).filter_map(move |j| {
            let position = match self.state[j] {
                VarState::Basic | VarState::Removed => return None,
                VarState::AtLower => NonbasicPosition::AtLower,
                VarState::AtUpper => NonbasicPosition::AtUpper,
                VarState::Free => NonbasicPosition::Free,
            };
            if self.lower[j] == self.upper[j] {
                return None;
            }
            Some(Candidate { index: j, reduced_cost: self.reduced_cost(j, y), position })
        })
    }

    fn iterate(&mut self) -> PhaseEnd {
        loop {
            if self.iterations >= self.max_iterations {
                return PhaseEnd::Stopped(SolveStatus::IterationLimit);
            }
            let y = self.duals();
            let tol = self.opts.optimality_tolerance;
            let rule = self.policy.rule();
            let entering = select_entering(rule, self.candidates(&y), tol);
            let (q, dir) = match entering {
                Some(e) => e,
                None => {
                    self.last_dual_infeasibility = self
                        .candidates(&y)
                        .filter_map(|c| c.eligibility(0.0).map(|(s, _)| s))
                        .fold(0.0, f64::max);
                    return PhaseEnd::Optimal;
                }
            };
            let mut alpha = vec![0.0; self.m];
            for &(i, v) in self.column(q) {
                alpha[i] = v;
            }
            self.factor.ftran(&mut alpha);
            let step = match self.ratio_test(q, dir, &alpha, rule) {
                Some(s) => s,
                None => return PhaseEnd::Unbounded,
            };
            self.iterations += 1;
            if let Err(status) = self.apply(q, dir, &alpha, step) {
                return PhaseEnd::Stopped(status);
            }
        }
    }

    /// Returns the step length and, unless the entering variable just flips
    /// bounds, the leaving basis position and whether it leaves at its upper bound.
    fn ratio_test(&self, q: usize, dir: f64, alpha: &[f64], rule: PivotRule) -> Option<(f64, Option<(usize, bool)>)> {
        let flip = self.upper[q] - self.lower[q];
        let ptol = self.opts.pivot_tolerance;
        let tol = self.primal_tol;
        match rule {
            PivotRule::Bland => {
                // textbook minimum ratio, ties to the lowest variable index
                let mut best: Option<(f64, usize, bool)> = None;
                for (i, &a) in alpha.iter().enumerate() {
                    if a.abs() <= ptol {
                        continue;
                    }
                    if let Some((ratio, to_upper)) = self.limit(i, -dir * a, 0.0) {
                        let ratio = ratio.max(0.0);
                        let better = match best {
                            None => true,
                            Some((t, r, _)) => {
                                ratio < t || (ratio == t && self.basis[i] < self.basis[r])
                            }
                        };
                        if better {
                            best = Some((ratio, i, to_upper));
                        }
                    }
                }
                match best {
                    Some((t, _, _)) if flip <= t => Some((flip, None)),
                    Some((t, r, up)) => Some((t, Some((r, up)))),
                    None if flip.is_finite() => Some((flip, None)),
                    None => None,
                }
            }
            PivotRule::Dantzig => {
                // Harris two-pass: relaxed bound first, then the largest pivot under it
                let mut theta_max = f64::INFINITY;
                for (i, &a) in alpha.iter().enumerate() {
                    if a.abs() <= ptol {
                        continue;
                    }
                    if let Some((ratio, _)) = self.limit(i, -dir * a, tol) {
                        theta_max = theta_max.min(ratio.max(0.0));
                    }
                }
                if theta_max == f64::INFINITY && flip == f64::INFINITY {
                    return None;
                }
                if flip <= theta_max {
                    return Some((flip, None));
                }
                let mut best: Option<(f64, usize, bool)> = None;
                let mut best_mag = 0.0;
                for (i, &a) in alpha.iter().enumerate() {
                    if a.abs() <= ptol {
                        continue;
                    }
                    if let Some((ratio, to_upper)) = self.limit(i, -dir * a, 0.0) {
                        if ratio <= theta_max {
                            let mag = a.abs();
                            let better = match best {
                                None => true,
                                Some((_, r, _)) => {
                                    mag > best_mag || (mag == best_mag && self.basis[i] < self.basis[r])
                                }
                            };
                            if better {
                                best = Some((ratio.max(0.0), i, to_upper));
                                best_mag = mag;
                            }
                        }
                    }
                }
                best.map(|(t, r, up)| (t, Some((r, up))))
            }
        }
    }

    /// Step at which basic position `i`, moving at `rate` per unit step,
    /// reaches a bound (relaxed by `slack`).
    fn limit(&self, i: usize, rate: f64, slack: f64) -> Option<(f64, bool)> {
        let v = self.basis[i];
        if rate < 0.0 {
            let lo = self.lower[v];
            lo.is_finite().then(|| ((self.x[v] - lo + slack) / -rate, false))
        } else if rate > 0.0 {
            let up = self.upper[v];
            up.is_finite().then(|| ((up - self.x[v] + slack) / rate, true))
        } else {
            None
        }
    }

    fn apply(&mut self, q: usize, dir: f64, alpha: &[f64], step: (f64, Option<(usize, bool)>)) -> Result<(), SolveStatus> {
        let (theta, leave) = step;
        if theta > 0.0 {
            self.x[q] += dir * theta;
            for (i, &a) in alpha.iter().enumerate() {
                if a != 0.0 {
                    let v = self.basis[i];
                    self.x[v] -= dir * theta * a;
                }
            }
        }
        self.policy.record(theta <= 1e-12);
        match leave {
            None => {
                if dir > 0.0 {
                    self.x[q] = self.upper[q];
                    self.state[q] = VarState::AtUpper;
                } else {
                    self.x[q] = self.lower[q];
                    self.state[q] = VarState::AtLower;
                }
            }
            Some((r, to_upper)) => {
                let out = self.basis[r];
                if to_upper {
                    self.x[out] = self.upper[out];
                    self.state[out] = VarState::AtUpper;
                } else {
                    self.x[out] = self.lower[out];
                    self.state[out] = VarState::AtLower;
                }
                if self.is_artificial(out) {
                    self.state[out] = VarState::Removed;
                    self.x[out] = 0.0;
                }
                self.basis[r] = q;
                self.state[q] = VarState::Basic;
                self.factor.update(r, alpha);
                if self.factor.num_updates() >= self.opts.refactor_interval {
                    self.refactor()?;
                }
            }
        }
        Ok(())
    }

    fn refactor(&mut self) -> Result<(), SolveStatus> {
        let cols: Vec<&[(usize, f64)]> = self.basis.iter().map(|&j| self.column(j)).collect();
        self.factor = BasisFactor::factorize(self.m, &cols).map_err(|e| {
            info!("refactorization failed: {e}");
            SolveStatus::NumericalBreakdown
        })?;
        self.recompute_basics();
        Ok(())
    }

    fn recompute_basics(&mut self) {
        let mut r = self.b.clone();
        for j in 0..self.num_vars() {
            if matches!(self.state[j], VarState::Basic) || self.x[j] == 0.0 {
                continue;
            }
            for &(i, v) in self.column(j) {
                r[i] -= v * self.x[j];
            }
        }
        self.factor.ftran(&mut r);
        for (i, &j) in self.basis.iter().enumerate() {
            self.x[j] = r[i];
        }
    }

    fn finish(&mut self, status: SolveStatus, phase1_iterations: usize) -> Solution {
        let (n, m) = (self.n, self.m);
        let mut s = Solution::empty(status, n, m);
        s.iterations = self.iterations;
        s.phase1_iterations = phase1_iterations;
        s.bland_switches = self.policy.bland_switches();
        if status != SolveStatus::Optimal {
            s.values = self.x[..n].to_vec();
            s.objective = self.lp.objective_value(&s.values);
            if status == SolveStatus::NumericalBreakdown && s.message.is_none() {
                s.message = Some("basis factorization became singular".into());
            }
            return s;
        }
        if self.refactor().is_err() {
            s.status = SolveStatus::NumericalBreakdown;
            s.message = Some("final refactorization failed".into());
            return s;
        }
        let mut values = self.x[..n].to_vec();
        let lower = self.lp.lower();
        let upper = self.lp.upper();
        let mut raw_violation = 0.0f64;
        for j in 0..n {
            let v = values[j];
            if v < lower[j] {
                raw_violation = raw_violation.max(lower[j] - v);
                values[j] = lower[j];
            } else if v > upper[j] {
                raw_violation = raw_violation.max(v - upper[j]);
                values[j] = upper[j];
            }
        }
        let report = super::residuals::check_residuals(self.lp, &values);
        s.max_residual = report.max_row_residual;
        s.max_bound_violation = report.max_bound_violation;
        s.objective = self.lp.objective_value(&values);
        s.values = values;
        s.duals = self.duals();
        s.max_dual_infeasibility = self.last_dual_infeasibility;
        let scale = 1.0 + self.lp.rhs_norm_inf();
        let limit = self.opts.feasibility_tolerance * scale;
        if s.max_residual > limit || raw_violation > limit {
            s.status = SolveStatus::NumericalBreakdown;
            s.message = Some(format!(
                "final point failed feasibility check: residual {:.3e}, bound violation {:.3e}",
                s.max_residual, raw_violation
            ));
        }
        debug!(
            "simplex finished: {} after {} iterations ({} in phase 1), objective {}",
            s.status.as_str(),
            s.iterations,
            phase1_iterations,
            s.objective
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn single_bounded_variable() {
        let mut lp = LinearProgram::new();
        lp.add_column(-1.0, 0.0, 5.0);
        let s = solve(&lp, &SolverOptions::default());
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_eq!(s.values, vec![5.0]);
        assert_eq!(s.objective, -5.0);
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let mut lp = LinearProgram::new();
        let x = lp.add_column(0.0, -INF, INF);
        lp.add_row(Relation::Ge, 1.0, &[(x, 1.0)]);
        lp.add_row(Relation::Le, 0.0, &[(x, 1.0)]);
        let s = solve(&lp, &SolverOptions::default());
        assert_eq!(s.status, SolveStatus::Infeasible);
        assert!((s.infeasibility.unwrap().total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn crossed_bounds_are_infeasible() {
        let mut lp = LinearProgram::new();
        lp.add_column(0.0, 1.0, 0.0);
        assert_eq!(solve(&lp, &SolverOptions::default()).status, SolveStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = LinearProgram::new();
        lp.add_column(-1.0, 0.0, INF);
        assert_eq!(solve(&lp, &SolverOptions::default()).status, SolveStatus::Unbounded);
    }

    #[test]
    fn empty_program_is_trivially_optimal() {
        let lp = LinearProgram::new();
        let s = solve(&lp, &SolverOptions::default());
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_eq!(s.objective, 0.0);
        match phase1(&lp, &SolverOptions::default()) {
            Phase1Outcome::Feasible { iterations, .. } => assert_eq!(iterations, 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn slack_start_needs_no_phase_one() {
        let mut lp = LinearProgram::new();
        let x = lp.add_column(-1.0, 0.0, INF);
        let y = lp.add_column(-2.0, 0.0, INF);
        lp.add_row(Relation::Le, 4.0, &[(x, 1.0), (y, 1.0)]);
        lp.add_row(Relation::Le, 3.0, &[(y, 1.0)]);
        match phase1(&lp, &SolverOptions::default()) {
            Phase1Outcome::Feasible { iterations, .. } => assert_eq!(iterations, 0),
            other => panic!("unexpected {other:?}"),
        }
        let s = solve(&lp, &SolverOptions::default());
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_eq!(s.phase1_iterations, 0);
        assert!((s.objective + 7.0).abs() < 1e-12);
    }

    #[test]
    fn capped_sources_below_load_report_violation() {
        // src1 + src2 = 10 with each source capped at 4: shortfall 2
        let mut lp = LinearProgram::new();
        let a = lp.add_column(1.0, 0.0, 4.0);
        let b = lp.add_column(1.0, 0.0, 4.0);
        lp.add_row(Relation::Eq, 10.0, &[(a, 1.0), (b, 1.0)]);
        match phase1(&lp, &SolverOptions::default()) {
            Phase1Outcome::Infeasible { infeasibility, .. } => {
                assert!((infeasibility.total - 2.0).abs() < 1e-12);
                assert_eq!(infeasibility.rows[0].0, 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn free_variables_and_ge_rows() {
        // min x + y, x - y = 1, x + y >= 3, x,y free → x = 2, y = 1
        let mut lp = LinearProgram::new();
        let x = lp.add_column(1.0, -INF, INF);
        let y = lp.add_column(1.0, -INF, INF);
        lp.add_row(Relation::Eq, 1.0, &[(x, 1.0), (y, -1.0)]);
        lp.add_row(Relation::Ge, 3.0, &[(x, 1.0), (y, 1.0)]);
        let s = solve(&lp, &SolverOptions::default());
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.objective - 3.0).abs() < 1e-12);
        assert!(s.max_dual_infeasibility <= 1e-9);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let mut lp = LinearProgram::new();
        let x = lp.add_column(-1.0, 0.0, INF);
        let y = lp.add_column(-1.0, 0.0, INF);
        lp.add_row(Relation::Eq, 2.0, &[(x, 1.0), (y, 2.0)]);
        lp.add_row(Relation::Le, 5.0, &[(x, 1.0), (y, 1.0)]);
        let opts = SolverOptions { max_iterations: Some(0), ..Default::default() };
        assert_eq!(solve(&lp, &opts).status, SolveStatus::IterationLimit);
    }
}
