//! Entering-variable selection and the degenerate-stall fallback.

/// Where a nonbasic variable currently sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonbasicPosition {
    AtLower,
    AtUpper,
    /// Free variable parked at zero; may move either way.
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Largest reduced-cost violation, lowest index on ties.
    Dantzig,
    /// Lowest eligible index.
    Bland,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub index: usize,
    pub reduced_cost: f64,
    pub position: NonbasicPosition,
}

/// Direction the entering variable moves in: `+1.0` increases it.
pub type Direction = f64;

impl Candidate {
    /// Improvement rate per unit step and the step direction, if the
    /// variable is eligible to enter at tolerance `tol`.
    pub fn eligibility(&self, tol: f64) -> Option<(f64, Direction)> {
        let d = self.reduced_cost;
        match self.position {
            NonbasicPosition::AtLower if d < -tol => Some((-d, 1.0)),
            NonbasicPosition::AtUpper if d > tol => Some((d, -1.0)),
            NonbasicPosition::Free if d.abs() > tol => Some((d.abs(), if d < 0.0 { 1.0 } else { -1.0 })),
            _ => None,
        }
    }
}

/// Picks the entering variable among `candidates` (expected in increasing
/// index order). Returns `None` when no candidate violates dual feasibility
/// by more than `tol`, i.e. the current basis is optimal.
pub fn select_entering<I>(rule: PivotRule, candidates: I, tol: f64) -> Option<(usize, Direction)>
where
    I: IntoIterator<Item = Candidate>,
{
    let mut best: Option<(usize, Direction)> = None;
    let mut best_score = 0.0;
    for cand in candidates {
        if let Some((score, dir)) = cand.eligibility(tol) {
            match rule {
                PivotRule::Bland => return Some((cand.index, dir)),
                PivotRule::Dantzig => {
                    if best.is_none() || score > best_score {
                        best = Some((cand.index, dir));
                        best_score = score;
                    }
                }
            }
        }
    }
    best
}

/// Tracks runs of degenerate pivots and switches to Bland's rule once a run
/// reaches the stall window. Any non-degenerate step switches back.
#[derive(Debug, Clone)]
pub struct PivotPolicy {
    stall_window: usize,
    degenerate_run: usize,
    rule: PivotRule,
    bland_switches: usize,
}

impl PivotPolicy {
    pub fn new(stall_window: usize) -> Self {
        PivotPolicy {
            stall_window,
            degenerate_run: 0,
            rule: PivotRule::Dantzig,
            bland_switches: 0,
        }
    }

    pub fn rule(&self) -> PivotRule {
        self.rule
    }

    pub fn bland_switches(&self) -> usize {
        self.bland_switches
    }

    pub fn record(&mut self, degenerate: bool) {
        if degenerate {
            self.degenerate_run += 1;
            if self.degenerate_run >= self.stall_window && self.rule == PivotRule::Dantzig {
                self.rule = PivotRule::Bland;
                self.bland_switches += 1;
            }
        } else {
            self.degenerate_run = 0;
            self.rule = PivotRule::Dantzig;
        }
    }
}
