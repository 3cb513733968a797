use std::collections::BTreeMap;

use serde::Serialize;

use super::problem::{LinearProgram, Relation};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowResidual {
    pub row: usize,
    /// Signed `a·x − b`.
    pub activity_minus_rhs: f64,
    /// Violation of the row's relation (0 when satisfied).
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundViolation {
    pub col: usize,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub rows: Vec<RowResidual>,
    pub bounds: Vec<BoundViolation>,
    pub max_row_residual: f64,
    pub max_bound_violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupResidual {
    pub rows: usize,
    pub max_residual: f64,
    pub worst_row: Option<usize>,
}

/// Per-row residuals `|a·x − b|` (one-sided for inequalities) and per-column
/// bound violations at `values`.
pub fn check_residuals(lp: &LinearProgram, values: &[f64]) -> ResidualReport {
    assert_eq!(values.len(), lp.num_cols(), "value vector length must match column count");
    let mut activity = vec![0.0; lp.num_rows()];
    for (j, col) in lp.columns().iter().enumerate() {
        let xj = values[j];
        for &(i, v) in col {
            activity[i] += v * xj;
        }
    }
    let mut max_row_residual = 0.0f64;
    let rows: Vec<RowResidual> = activity
        .iter()
        .zip(lp.rhs())
        .zip(lp.relations())
        .enumerate()
        .map(|(row, ((&a, &b), rel))| {
            let diff = a - b;
            let residual = match rel {
                Relation::Eq => diff.abs(),
                Relation::Le => diff.max(0.0),
                Relation::Ge => (-diff).max(0.0),
            };
            max_row_residual = max_row_residual.max(residual);
            RowResidual { row, activity_minus_rhs: diff, residual }
        })
        .collect();
    let mut max_bound_violation = 0.0f64;
    let bounds = values
        .iter()
        .enumerate()
        .map(|(col, &x)| {
            let violation = (lp.lower()[col] - x).max(x - lp.upper()[col]).max(0.0);
            max_bound_violation = max_bound_violation.max(violation);
            BoundViolation { col, violation }
        })
        .collect();
    ResidualReport { rows, bounds, max_row_residual, max_bound_violation }
}

impl ResidualReport {
    /// Groups row residuals under the key returned for each row index.
    pub fn grouped<F>(&self, key: F) -> BTreeMap<String, GroupResidual>
    where
        F: Fn(usize) -> String,
    {
        let mut out: BTreeMap<String, GroupResidual> = BTreeMap::new();
        for r in &self.rows {
            let g = out.entry(key(r.row)).or_insert(GroupResidual { rows: 0, max_residual: 0.0, worst_row: None });
            g.rows += 1;
            if g.worst_row.is_none() || r.residual > g.max_residual {
                g.max_residual = r.residual;
                g.worst_row = Some(r.row);
            }
        }
        out
    }

    /// Rows whose residual exceeds `tol`, worst first.
    pub fn violations(&self, tol: f64) -> Vec<&RowResidual> {
        let mut v: Vec<&RowResidual> = self.rows.iter().filter(|r| r.residual > tol).collect();
        v.sort_by(|a, b| b.residual.total_cmp(&a.residual).then(a.row.cmp(&b.row)));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> LinearProgram {
        let mut lp = LinearProgram::new();
        let x = lp.add_column(0.0, 0.0, 10.0);
        let y = lp.add_column(0.0, 0.0, 10.0);
        let z = lp.add_column(0.0, 0.0, 10.0);
        lp.add_row(Relation::Eq, 3.0, &[(x, 1.0), (y, 2.0)]);
        lp.add_row(Relation::Eq, 0.0, &[(y, 3.0), (z, -1.0)]);
        lp.add_row(Relation::Le, 5.0, &[(x, 1.0), (z, 1.0)]);
        lp
    }

    #[test]
    fn exact_point_has_zero_residuals() {
        let r = check_residuals(&sample(), &[1.0, 1.0, 3.0]);
        assert_eq!(r.max_row_residual, 0.0);
        assert_eq!(r.max_bound_violation, 0.0);
    }

    #[test]
    fn perturbation_shows_only_in_incident_rows() {
        let eps = 1e-3;
        let r = check_residuals(&sample(), &[1.0, 1.0 + eps, 3.0]);
        // y appears in rows 0 (coef 2) and 1 (coef 3), not in row 2
        assert!((r.rows[0].residual - 2.0 * eps).abs() < 1e-15);
        assert!((r.rows[1].residual - 3.0 * eps).abs() < 1e-15);
        assert_eq!(r.rows[2].residual, 0.0);
        let v = r.violations(1e-6);
        assert_eq!(v.iter().map(|r| r.row).collect::<Vec<_>>(), vec![1, 0]);
    }

    #[test]
    fn empty_program_gives_empty_report() {
        let r = check_residuals(&LinearProgram::new(), &[]);
        assert!(r.rows.is_empty() && r.bounds.is_empty());
    }

    #[test]
    fn grouping_by_key() {
        let r = check_residuals(&sample(), &[1.0, 1.5, 3.0]);
        let g = r.grouped(|row| if row < 2 { "balance".into() } else { "cap".into() });
        assert_eq!(g["balance"].rows, 2);
        assert_eq!(g["balance"].worst_row, Some(1));
        assert_eq!(g["cap"].max_residual, 0.0);
    }
}
