//! Brute-force reference solver for tiny LPs.
//!
//! Enumerates every choice of rows held at equality, basic columns and
//! nonbasic bound positions, solves each square system by dense Gaussian
//! elimination and keeps the best feasible point. Infinite bounds are
//! replaced by a synthetic box; the problem is reported unbounded when
//! doubling the box still improves the optimum. Shares no code with the
//! simplex path.

use super::problem::{LinearProgram, Relation};
use super::simplex::{Solution, SolveStatus};
use super::LpError;

pub const MAX_COLS: usize = 10;
pub const MAX_ROWS: usize = 12;
const BOX: f64 = 1e6;

struct Best {
    objective: f64,
    values: Vec<f64>,
    vertices: usize,
}

pub fn oracle_enumerate(lp: &LinearProgram) -> Result<Solution, LpError> {
    let (n, m) = (lp.num_cols(), lp.num_rows());
    if n > MAX_COLS || m > MAX_ROWS {
        return Err(LpError::OracleTooLarge { cols: n, rows: m });
    }
    lp.check()?;
    let dense = dense_rows(lp);
    let small = enumerate(lp, &dense, BOX);
    let mut sol = Solution {
        status: SolveStatus::Infeasible,
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
    };
    let small = match small {
        Some(b) => b,
        None => return Ok(sol),
    };
    let large = enumerate(lp, &dense, 2.0 * BOX).expect("larger box keeps feasibility");
    sol.iterations = small.vertices + large.vertices;
    if large.objective < small.objective - 1e-6 * (1.0 + small.objective.abs()) {
        sol.status = SolveStatus::Unbounded;
        sol.values = large.values;
        sol.objective = large.objective;
        return Ok(sol);
    }
    sol.status = SolveStatus::Optimal;
    sol.objective = small.objective;
    sol.values = small.values;
    Ok(sol)
}

fn dense_rows(lp: &LinearProgram) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![0.0; lp.num_cols()]; lp.num_rows()];
    for (i, j, v) in lp.triplets() {
        rows[i][j] = v;
    }
    rows
}

fn enumerate(lp: &LinearProgram, a: &[Vec<f64>], boxed: f64) -> Option<Best> {
    let (n, m) = (lp.num_cols(), lp.num_rows());
    let lo: Vec<f64> = lp.lower().iter().map(|&l| if l.is_finite() { l } else { -boxed }).collect();
    let up: Vec<f64> = lp.upper().iter().map(|&u| if u.is_finite() { u } else { boxed }).collect();
    if (0..n).any(|j| lo[j] > up[j]) {
        return None;
    }
    let b = lp.rhs();
    let c = lp.objective();

    let mut best: Option<Best> = None;
    let mut vertices = 0usize;
    let mut x = vec![0.0; n];
    // any vertex is pinned by k independent rows held at equality plus
    // n - k columns at a bound; rows outside the chosen set are only checked
    for row_mask in 0u32..(1u32 << m) {
        let active: Vec<usize> = (0..m).filter(|&i| row_mask >> i & 1 == 1).collect();
        let k = active.len();
        if k > n {
            continue;
        }
        for basic_mask in 0u32..(1u32 << n) {
            if basic_mask.count_ones() as usize != k {
                continue;
            }
            let basic: Vec<usize> = (0..n).filter(|&j| basic_mask >> j & 1 == 1).collect();
            let nonbasic: Vec<usize> = (0..n).filter(|&j| basic_mask >> j & 1 == 0).collect();
            for bound_mask in 0u32..(1u32 << nonbasic.len()) {
                // fixed columns only need one of the two positions
                if nonbasic.iter().enumerate().any(|(t, &j)| bound_mask >> t & 1 == 1 && lo[j] == up[j]) {
                    continue;
                }
                for (t, &j) in nonbasic.iter().enumerate() {
                    x[j] = if bound_mask >> t & 1 == 1 { up[j] } else { lo[j] };
                }
                let mut mat: Vec<Vec<f64>> = active.iter().map(|&i| basic.iter().map(|&j| a[i][j]).collect()).collect();
                let mut rhs: Vec<f64> = active
                    .iter()
                    .map(|&i| b[i] - nonbasic.iter().map(|&j| a[i][j] * x[j]).sum::<f64>())
                    .collect();
                if !gauss_solve(&mut mat, &mut rhs) {
                    continue;
                }
                for (t, &j) in basic.iter().enumerate() {
                    x[j] = rhs[t];
                }
                if !feasible(lp, a, &x, &lo, &up) {
                    continue;
                }
                vertices += 1;
                let obj: f64 = c.iter().zip(&x).map(|(c, x)| c * x).sum();
                if best.as_ref().map_or(true, |bst| obj < bst.objective) {
                    best = Some(Best { objective: obj, values: x.clone(), vertices: 0 });
                }
            }
        }
    }
    best.map(|mut b| {
        b.vertices = vertices;
        b
    })
}

fn feasible(lp: &LinearProgram, a: &[Vec<f64>], x: &[f64], lo: &[f64], up: &[f64]) -> bool {
    for j in 0..x.len() {
        let tol = 1e-9 * (1.0 + x[j].abs());
        if x[j] < lo[j] - tol || x[j] > up[j] + tol {
            return false;
        }
    }
    for (i, row) in a.iter().enumerate() {
        let act: f64 = row.iter().zip(x).map(|(a, x)| a * x).sum();
        let mag: f64 = row.iter().zip(x).map(|(a, x)| (a * x).abs()).sum();
        let tol = 1e-9 * (1.0 + mag + lp.rhs()[i].abs());
        let d = act - lp.rhs()[i];
        let ok = match lp.relations()[i] {
            Relation::Eq => d.abs() <= tol,
            Relation::Le => d <= tol,
            Relation::Ge => d >= -tol,
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Dense Gaussian elimination with partial pivoting; `false` when singular.
fn gauss_solve(a: &mut [Vec<f64>], b: &mut [f64]) -> bool {
    let k = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..k {
        let piv = (col..k).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs())).unwrap();
        if a[piv][col].abs() <= 1e-12 * scale.max(1.0) {
            return false;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..k {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for cc in col..k {
                    a[r][cc] -= f * a[col][cc];
                }
                b[r] -= f * b[col];
            }
        }
    }
    for col in (0..k).rev() {
        let mut s = b[col];
        for cc in col + 1..k {
            s -= a[col][cc] * b[cc];
        }
        b[col] = s / a[col][col];
    }
    true
}
