use serde::{Deserialize, Serialize};

use super::LpError;

/// Relation of a constraint row to its right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

/// A minimization LP stored column-wise.
///
/// Columns keep their entries sorted by row index as long as rows are
/// appended in order, which is what [`LinearProgram::add_row`] does.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearProgram {
    cols: Vec<Vec<(usize, f64)>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    objective: Vec<f64>,
    relations: Vec<Relation>,
    rhs: Vec<f64>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// Appends a column with no constraint entries yet.
    pub fn add_column(&mut self, cost: f64, lower: f64, upper: f64) -> usize {
        self.cols.push(Vec::new());
        self.objective.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.cols.len() - 1
    }

    /// Appends a row. Zero coefficients are dropped and repeated columns merged.
    ///
    /// Panics if an entry names a column that does not exist.
    pub fn add_row(&mut self, relation: Relation, rhs: f64, entries: &[(usize, f64)]) -> usize {
        let row = self.rhs.len();
        self.rhs.push(rhs);
        self.relations.push(relation);
        for &(col, value) in entries {
            assert!(col < self.cols.len(), "row {row} references missing column {col}");
            let column = &mut self.cols[col];
            match column.last_mut() {
                Some((r, v)) if *r == row => *v += value,
                _ => column.push((row, value)),
            }
        }
        for &(col, _) in entries {
            let column = &mut self.cols[col];
            if matches!(column.last(), Some(&(r, v)) if r == row && v == 0.0) {
                column.pop();
            }
        }
        row
    }

    pub fn set_objective(&mut self, col: usize, cost: f64) {
        self.objective[col] = cost;
    }

    pub fn set_bounds(&mut self, col: usize, lower: f64, upper: f64) {
        self.lower[col] = lower;
        self.upper[col] = upper;
    }

    pub fn set_rhs(&mut self, row: usize, rhs: f64) {
        self.rhs[row] = rhs;
    }

    pub fn column(&self, col: usize) -> &[(usize, f64)] {
        &self.cols[col]
    }

    pub fn columns(&self) -> &[Vec<(usize, f64)>] {
        &self.cols
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn rhs_norm_inf(&self) -> f64 {
        self.rhs.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Row-major copy of the coefficient matrix.
    pub fn row_entries(&self) -> Vec<Vec<(usize, f64)>> {
        let mut rows = vec![Vec::new(); self.num_rows()];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                rows[i].push((j, v));
            }
        }
        rows
    }

    /// Coefficient triplets `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |&(i, v)| (i, j, v)))
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().zip(values).map(|(c, x)| c * x).sum()
    }

    /// Returns a copy with every objective coefficient multiplied by `factor`.
    pub fn scaled_objective(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.objective {
            *c *= factor;
        }
        out
    }

    /// Checks the structural invariants: finite data, no stored zeros,
    /// sorted unique row indices per column.
    ///
    /// Bounds with `lower > upper` are allowed here; the solver reports them
    /// as infeasible.
    pub fn check(&self) -> Result<(), LpError> {
        for (i, b) in self.rhs.iter().enumerate() {
            if !b.is_finite() {
                return Err(LpError::Invalid(format!("row {i} has non-finite right-hand side")));
            }
        }
        for (j, col) in self.cols.iter().enumerate() {
            if !self.objective[j].is_finite() {
                return Err(LpError::Invalid(format!("column {j} has non-finite cost")));
            }
            if self.lower[j].is_nan() || self.upper[j].is_nan() {
                return Err(LpError::Invalid(format!("column {j} has NaN bound")));
            }
            if self.lower[j] == f64::INFINITY || self.upper[j] == f64::NEG_INFINITY {
                return Err(LpError::Invalid(format!("column {j} has an unusable infinite bound")));
            }
            let mut prev = None;
            for &(i, v) in col {
                if i >= self.num_rows() {
                    return Err(LpError::Invalid(format!("column {j} references missing row {i}")));
                }
                if v == 0.0 || !v.is_finite() {
                    return Err(LpError::Invalid(format!("column {j} stores coefficient {v} in row {i}")));
                }
                if prev.is_some_and(|p| p >= i) {
                    return Err(LpError::Invalid(format!("column {j} rows are not strictly increasing")));
                }
                prev = Some(i);
            }
        }
        Ok(())
    }
}
