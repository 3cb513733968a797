//! Fixed-format MPS emission and a whitespace-tolerant MPS reader.
//!
//! Layout written (1-based character columns):
//!
//! ```text
//! NAME          <name>
//! ROWS
//!  N  COST
//!  E  R0000001
//! COLUMNS
//!     C0000001  COST      10.0
//!     C0000001  R0000001  1.0
//! RHS
//!     RHS       R0000001  9.0
//! BOUNDS
//!  UP BND       C0000001  5.0
//! ENDATA
//! ```
//!
//! Field 1 occupies columns 2-3, field 2 columns 5-12, field 3 columns
//! 15-22 and field 4 columns 25-36. One coefficient per line. Names longer
//! than eight characters force positional short names (`R0000001`,
//! `C0000001`) for the whole row or column set, and the original names are
//! listed in a sidecar file `<path>.names` with lines `ROW <short> <long>` /
//! `COL <short> <long>`. Numbers use the most accurate text that fits in
//! twelve characters.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::problem::{LinearProgram, Relation};
use super::LpError;

const OBJ_ROW: &str = "COST";

/// Human-readable names for the rows and columns of an LP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpNames {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
}

impl LpNames {
    /// `R1, R2, …` / `C1, C2, …`.
    pub fn generic(lp: &LinearProgram) -> Self {
        LpNames {
            rows: (1..=lp.num_rows()).map(|i| format!("R{i}")).collect(),
            cols: (1..=lp.num_cols()).map(|j| format!("C{j}")).collect(),
        }
    }
}

/// Result of writing an MPS document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MpsText {
    pub mps: String,
    /// Contents of the sidecar name map, when names had to be shortened.
    pub name_map: Option<String>,
}

fn fits(names: &[String]) -> bool {
    names.iter().all(|n| !n.is_empty() && n.len() <= 8 && !n.contains(char::is_whitespace) && n != OBJ_ROW)
}

/// Formats `v` in at most twelve characters, as accurately as possible.
pub fn format_field(v: f64) -> String {
    let plain = format!("{v}");
    if plain.len() <= 12 {
        return plain;
    }
    let mut candidates = Vec::new();
    for prec in 0..=11 {
        let e = format!("{v:.prec$e}");
        if e.len() <= 12 {
            candidates.push(e);
        }
        let f = format!("{v:.prec$}");
        if f.len() <= 12 {
            candidates.push(f);
        }
    }
    candidates
        .into_iter()
        .min_by(|a, b| {
            let ea = (a.parse::<f64>().unwrap() - v).abs();
            let eb = (b.parse::<f64>().unwrap() - v).abs();
            ea.total_cmp(&eb).then(a.len().cmp(&b.len()))
        })
        .expect("some representation always fits")
}

pub fn write_mps(lp: &LinearProgram, names: &LpNames, problem_name: &str) -> MpsText {
    assert_eq!(names.rows.len(), lp.num_rows());
    assert_eq!(names.cols.len(), lp.num_cols());
    let mut map = String::new();
    let rows: Vec<String> = if fits(&names.rows) {
        names.rows.clone()
    } else {
        (0..lp.num_rows())
            .map(|i| {
                let short = format!("R{:07}", i + 1);
                let _ = writeln!(map, "ROW {short} {}", names.rows[i]);
                short
            })
            .collect()
    };
    let cols: Vec<String> = if fits(&names.cols) {
        names.cols.clone()
    } else {
        (0..lp.num_cols())
            .map(|j| {
                let short = format!("C{:07}", j + 1);
                let _ = writeln!(map, "COL {short} {}", names.cols[j]);
                short
            })
            .collect()
    };

    let mut out = String::new();
    let title: String = problem_name.chars().filter(|c| !c.is_whitespace()).collect();
    let _ = writeln!(out, "NAME          {}", if title.is_empty() { "HUBFLOW" } else { &title });
    out.push_str("ROWS\n");
    let _ = writeln!(out, " N  {OBJ_ROW}");
    for (i, rel) in lp.relations().iter().enumerate() {
        let t = match rel {
            Relation::Eq => "E",
            Relation::Le => "L",
            Relation::Ge => "G",
        };
        let _ = writeln!(out, " {t:<2} {}", rows[i]);
    }
    out.push_str("COLUMNS\n");
    for (j, col) in lp.columns().iter().enumerate() {
        let c = lp.objective()[j];
        if c != 0.0 {
            let _ = writeln!(out, "    {:<8}  {:<8}  {:>12}", cols[j], OBJ_ROW, format_field(c));
        }
        for &(i, v) in col {
            let _ = writeln!(out, "    {:<8}  {:<8}  {:>12}", cols[j], rows[i], format_field(v));
        }
        if c == 0.0 && col.is_empty() {
            // keep the column declared
            let _ = writeln!(out, "    {:<8}  {:<8}  {:>12}", cols[j], OBJ_ROW, "0");
        }
    }
    out.push_str("RHS\n");
    for (i, &b) in lp.rhs().iter().enumerate() {
        if b != 0.0 {
            let _ = writeln!(out, "    {:<8}  {:<8}  {:>12}", "RHS", rows[i], format_field(b));
        }
    }
    out.push_str("BOUNDS\n");
    for j in 0..lp.num_cols() {
        let (l, u) = (lp.lower()[j], lp.upper()[j]);
        let mut line = |t: &str, v: Option<f64>| {
            let _ = match v {
                Some(v) => writeln!(out, " {t:<2} {:<8}  {:<8}  {:>12}", "BND", cols[j], format_field(v)),
                None => writeln!(out, " {t:<2} {:<8}  {}", "BND", cols[j]),
            };
        };
        if l == f64::NEG_INFINITY && u == f64::INFINITY {
            line("FR", None);
        } else if l == u {
            line("FX", Some(l));
        } else {
            if l == f64::NEG_INFINITY {
                line("MI", None);
            } else if l != 0.0 || u < 0.0 {
                line("LO", Some(l));
            }
            if u.is_finite() {
                line("UP", Some(u));
            } else if l == f64::NEG_INFINITY {
                line("PL", None);
            }
        }
    }
    out.push_str("ENDATA\n");
    MpsText { mps: out, name_map: if map.is_empty() { None } else { Some(map) } }
}

/// Reads an MPS document (fixed or free layout, names without spaces).
///
/// Returns the program and the names as written in the file; apply
/// [`apply_name_map`] to recover long names from a sidecar.
pub fn read_mps(text: &str) -> Result<(LinearProgram, LpNames), LpError> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Rows,
        Columns,
        Rhs,
        Bounds,
        Done,
    }
    let err = |line: usize, msg: String| LpError::Mps { line, message: msg };
    let mut section = Section::None;
    let mut obj_row: Option<String> = None;
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut row_names = Vec::new();
    let mut relations = Vec::new();
    let mut col_index: HashMap<String, usize> = HashMap::new();
    let mut col_names: Vec<String> = Vec::new();
    let mut entries: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut costs: Vec<f64> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut lower: Vec<f64> = Vec::new();
    let mut upper: Vec<f64> = Vec::new();
    let mut lower_set: Vec<bool> = Vec::new();

    let number = |tok: &str, line: usize| tok.parse::<f64>().map_err(|_| err(line, format!("bad number '{tok}'")));

    for (k, raw) in text.lines().enumerate() {
        let ln = k + 1;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        if !raw.starts_with(' ') && !raw.starts_with('\t') {
            let head = raw.split_whitespace().next().unwrap_or("");
            section = match head {
                "NAME" => Section::None,
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "ENDATA" => Section::Done,
                "OBJSENSE" | "RANGES" => return Err(err(ln, format!("section {head} is not supported"))),
                other => return Err(err(ln, format!("unknown section '{other}'"))),
            };
            continue;
        }
        let tok: Vec<&str> = raw.split_whitespace().collect();
        match section {
            Section::Rows => {
                if tok.len() != 2 {
                    return Err(err(ln, "expected '<type> <name>'".into()));
                }
                let rel = match tok[0] {
                    "N" => {
                        if obj_row.is_none() {
                            obj_row = Some(tok[1].to_string());
                        }
                        continue;
                    }
                    "E" => Relation::Eq,
                    "L" => Relation::Le,
                    "G" => Relation::Ge,
                    t => return Err(err(ln, format!("unknown row type '{t}'"))),
                };
                if row_index.insert(tok[1].to_string(), relations.len()).is_some() {
                    return Err(err(ln, format!("duplicate row '{}'", tok[1])));
                }
                row_names.push(tok[1].to_string());
                relations.push(rel);
                rhs.push(0.0);
            }
            Section::Columns => {
                if tok.contains(&"'MARKER'") {
                    return Err(err(ln, "integer markers are not supported".into()));
                }
                if tok.len() != 3 && tok.len() != 5 {
                    return Err(err(ln, "expected '<col> <row> <value> [<row> <value>]'".into()));
                }
                let j = match col_index.get(tok[0]) {
                    Some(&j) => j,
                    None => {
                        let j = col_names.len();
                        col_index.insert(tok[0].to_string(), j);
                        col_names.push(tok[0].to_string());
                        entries.push(Vec::new());
                        costs.push(0.0);
                        lower.push(0.0);
                        upper.push(f64::INFINITY);
                        lower_set.push(false);
                        j
                    }
                };
                for pair in tok[1..].chunks(2) {
                    let v = number(pair[1], ln)?;
                    if Some(pair[0]) == obj_row.as_deref() {
                        costs[j] += v;
                    } else {
                        let i = *row_index.get(pair[0]).ok_or_else(|| err(ln, format!("unknown row '{}'", pair[0])))?;
                        entries[j].push((i, v));
                    }
                }
            }
            Section::Rhs => {
                let pairs = if tok.len() % 2 == 1 { &tok[1..] } else { &tok[..] };
                for pair in pairs.chunks(2) {
                    if pair.len() != 2 {
                        return Err(err(ln, "malformed RHS entry".into()));
                    }
                    let v = number(pair[1], ln)?;
                    if Some(pair[0]) == obj_row.as_deref() {
                        return Err(err(ln, "objective constants are not supported".into()));
                    }
                    let i = *row_index.get(pair[0]).ok_or_else(|| err(ln, format!("unknown row '{}'", pair[0])))?;
                    rhs[i] = v;
                }
            }
            Section::Bounds => {
                if tok.len() < 3 {
                    return Err(err(ln, "malformed bound".into()));
                }
                let kind = tok[0];
                let takes_value = matches!(kind, "UP" | "LO" | "FX");
                let (col, val) = match (takes_value, tok.len()) {
                    (true, 4) => (tok[2], Some(number(tok[3], ln)?)),
                    (true, 3) => (tok[1], Some(number(tok[2], ln)?)),
                    (false, 3) => (tok[2], None),
                    (false, 2) => (tok[1], None),
                    _ => return Err(err(ln, "malformed bound".into())),
                };
                let j = *col_index.get(col).ok_or_else(|| err(ln, format!("unknown column '{col}'")))?;
                match (kind, val) {
                    ("UP", Some(v)) => {
                        upper[j] = v;
                        if v < 0.0 && !lower_set[j] && lower[j] == 0.0 {
                            lower[j] = f64::NEG_INFINITY;
                        }
                    }
                    ("LO", Some(v)) => {
                        lower[j] = v;
                        lower_set[j] = true;
                    }
                    ("FX", Some(v)) => {
                        lower[j] = v;
                        upper[j] = v;
                        lower_set[j] = true;
                    }
                    ("FR", None) => {
                        lower[j] = f64::NEG_INFINITY;
                        upper[j] = f64::INFINITY;
                    }
                    ("MI", None) => {
                        lower[j] = f64::NEG_INFINITY;
                        lower_set[j] = true;
                    }
                    ("PL", None) => upper[j] = f64::INFINITY,
                    (k, _) => return Err(err(ln, format!("unsupported bound type '{k}'"))),
                }
            }
            Section::None => {}
            Section::Done => return Err(err(ln, "content after ENDATA".into())),
        }
    }
    if section != Section::Done {
        return Err(err(text.lines().count(), "missing ENDATA".into()));
    }

    let mut lp = LinearProgram::new();
    for j in 0..col_names.len() {
        lp.add_column(costs[j], lower[j], upper[j]);
    }
    let mut by_row: Vec<Vec<(usize, f64)>> = vec![Vec::new(); relations.len()];
    for (j, col) in entries.iter().enumerate() {
        for &(i, v) in col {
            by_row[i].push((j, v));
        }
    }
    for (i, rel) in relations.iter().enumerate() {
        lp.add_row(*rel, rhs[i], &by_row[i]);
    }
    Ok((lp, LpNames { rows: row_names, cols: col_names }))
}

/// Replaces short names with the long ones listed in a sidecar name map.
pub fn apply_name_map(names: &mut LpNames, map: &str) -> Result<(), LpError> {
    let mut rows = HashMap::new();
    let mut cols = HashMap::new();
    for (k, line) in map.lines().enumerate() {
        let mut it = line.splitn(3, ' ');
        match (it.next(), it.next(), it.next()) {
            (Some("ROW"), Some(s), Some(l)) => {
                rows.insert(s.to_string(), l.to_string());
            }
            (Some("COL"), Some(s), Some(l)) => {
                cols.insert(s.to_string(), l.to_string());
            }
            _ => return Err(LpError::Mps { line: k + 1, message: "malformed name map line".into() }),
        }
    }
    for n in &mut names.rows {
        if let Some(l) = rows.get(n) {
            *n = l.clone();
        }
    }
    for n in &mut names.cols {
        if let Some(l) = cols.get(n) {
            *n = l.clone();
        }
    }
    Ok(())
}
