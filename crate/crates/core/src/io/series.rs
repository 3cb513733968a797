//! Two-column `step,value` series files.
//!
//! Steps are 1-based and consecutive. A file holding the single data row
//! `*,value` repeats that value at every step of the grid.

use std::path::Path;

use super::IoError;
use crate::model::TimeGrid;

pub fn load_series(path: &Path, grid: &TimeGrid) -> Result<Vec<f64>, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::read(path, e))?;
    parse_series(&text, grid.len()).map_err(|(line, message)| IoError::Series { path: path.display().to_string(), line, message })
        .and_then(|v| {
            if v.len() == grid.len() {
                Ok(v)
            } else {
                Err(IoError::SeriesLength { path: path.display().to_string(), found: v.len(), expected: grid.len() })
            }
        })
}

/// Parses series text, expanding a broadcast row to `steps` values.
/// Errors carry the 1-based line number.
pub fn parse_series(text: &str, steps: usize) -> Result<Vec<f64>, (usize, String)> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut values = Vec::new();
    let mut broadcast = None;
    let mut saw_header = false;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| (e.position().map_or(0, |p| p.line() as usize), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if !saw_header {
            if rec.len() != 2 || &rec[0] != "step" || &rec[1] != "value" {
                return Err((line, "expected header `step,value`".into()));
            }
            saw_header = true;
            continue;
        }
        if rec.len() != 2 {
            return Err((line, format!("expected 2 fields, found {}", rec.len())));
        }
        if broadcast.is_some() {
            return Err((line, "a broadcast row must be the only data row".into()));
        }
        let value: f64 = rec[1].parse().map_err(|_| (line, format!("value '{}' is not a number", &rec[1])))?;
        if !value.is_finite() {
            return Err((line, format!("value '{}' is not finite", &rec[1])));
        }
        if &rec[0] == "*" {
            if !values.is_empty() {
                return Err((line, "a broadcast row must be the only data row".into()));
            }
            broadcast = Some(value);
            continue;
        }
        let step: usize = rec[0].parse().map_err(|_| (line, format!("step '{}' is not a positive integer", &rec[0])))?;
        if step != values.len() + 1 {
            return Err((line, format!("step {step} out of order, expected {}", values.len() + 1)));
        }
        values.push(value);
    }
    if !saw_header {
        return Err((1, "missing header `step,value`".into()));
    }
    Ok(match broadcast {
        Some(v) => vec![v; steps],
        None => values,
    })
}

/// Series text in the same layout, one row per step.
pub fn format_series(values: &[f64]) -> String {
    let mut out = String::from("step,value\n");
    for (t, v) in values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", t + 1, v));
    }
    out
}
