//! Linear programs and the embedded bounded revised simplex solver.

mod lptext;
mod lu;
mod mps;
mod oracle;
mod pivot;
mod problem;
mod residuals;
mod simplex;

pub use lptext::write_lp_text;
pub use lu::{BasisFactor, SingularBasis};
pub use mps::{apply_name_map, format_field, read_mps, write_mps, LpNames, MpsText};
pub use oracle::{oracle_enumerate, MAX_COLS as ORACLE_MAX_COLS, MAX_ROWS as ORACLE_MAX_ROWS};
pub use pivot::{select_entering, Candidate, NonbasicPosition, PivotPolicy, PivotRule};
pub use problem::{LinearProgram, Relation};
pub use residuals::{check_residuals, BoundViolation, GroupResidual, ResidualReport, RowResidual};
pub use simplex::{phase1, solve, Infeasibility, Phase1Outcome, SolveStatus, SolverOptions, Solution};

#[derive(Debug, thiserror::Error)]
pub enum LpError {
    #[error("invalid linear program: {0}")]
    Invalid(String),
    #[error("oracle limited to {max_cols} columns and {max_rows} rows, got {cols} x {rows}", max_cols = oracle::MAX_COLS, max_rows = oracle::MAX_ROWS)]
    OracleTooLarge { cols: usize, rows: usize },
    #[error("MPS line {line}: {message}")]
    Mps { line: usize, message: String },
}
