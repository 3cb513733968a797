//! CPLEX-style LP text output, for inspection and external cross-checks.

use std::fmt::Write as _;

use super::mps::LpNames;
use super::problem::{LinearProgram, Relation};

const TERMS_PER_LINE: usize = 6;

fn clean(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "_.".contains(c) { c } else { '_' })
        .collect();
    if s.starts_with(|c: char| c.is_ascii_digit() || c == '.') || s.is_empty() {
        s.insert(0, '_');
    }
    s
}

fn num(v: f64) -> String {
    format!("{v:?}")
}

fn expression(out: &mut String, terms: &[(usize, f64)], cols: &[String]) {
    if terms.is_empty() {
        out.push_str(" 0 ");
        out.push_str(cols.first().map(String::as_str).unwrap_or("_"));
        return;
    }
    for (k, &(j, v)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n  ");
        }
        let sign = if v < 0.0 { '-' } else { '+' };
        if k == 0 && sign == '+' {
            let _ = write!(out, " {} {}", num(v), cols[j]);
        } else {
            let _ = write!(out, " {sign} {} {}", num(v.abs()), cols[j]);
        }
    }
}

pub fn write_lp_text(lp: &LinearProgram, names: &LpNames) -> String {
    let cols: Vec<String> = names.cols.iter().map(|n| clean(n)).collect();
    let rows: Vec<String> = names.rows.iter().map(|n| clean(n)).collect();
    let mut out = String::from("\\ hubflow export\nMinimize\n obj:");
    let obj: Vec<(usize, f64)> =
        lp.objective().iter().enumerate().filter(|(_, &c)| c != 0.0).map(|(j, &c)| (j, c)).collect();
    expression(&mut out, &obj, &cols);
    out.push_str("\nSubject To\n");
    for (i, terms) in lp.row_entries().iter().enumerate() {
        let _ = write!(out, " {}:", rows[i]);
        expression(&mut out, terms, &cols);
        let op = match lp.relations()[i] {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        };
        let _ = writeln!(out, " {op} {}", num(lp.rhs()[i]));
    }
    out.push_str("Bounds\n");
    for j in 0..lp.num_cols() {
        let (l, u) = (lp.lower()[j], lp.upper()[j]);
        let c = &cols[j];
        let _ = match (l.is_finite(), u.is_finite()) {
            _ if l == u => writeln!(out, " {c} = {}", num(l)),
            (false, false) => writeln!(out, " {c} free"),
            (false, true) => writeln!(out, " -inf <= {c} <= {}", num(u)),
            (true, false) if l == 0.0 => Ok(()),
            (true, false) => writeln!(out, " {c} >= {}", num(l)),
            (true, true) if l == 0.0 => writeln!(out, " {c} <= {}", num(u)),
            (true, true) => writeln!(out, " {} <= {c} <= {}", num(l), num(u)),
        };
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_program() {
        let mut lp = LinearProgram::new();
        let x = lp.add_column(10.0, 0.0, 5.0);
        let y = lp.add_column(0.0, -1.0, f64::INFINITY);
        let z = lp.add_column(-2.5, f64::NEG_INFINITY, f64::INFINITY);
        lp.add_row(Relation::Eq, 9.0, &[(x, 0.9), (y, -1.0)]);
        lp.add_row(Relation::Ge, 1.0, &[(z, 1.0)]);
        let names = LpNames {
            rows: vec!["EQ9.boiler.t001".into(), "cap-z".into()],
            cols: vec!["IN.gas".into(), "OUT.heat".into(), "z".into()],
        };
        let text = write_lp_text(&lp, &names);
        let expected = "\\ hubflow export
Minimize
 obj: 10.0 IN.gas - 2.5 z
Subject To
 EQ9.boiler.t001: 0.9 IN.gas - 1.0 OUT.heat = 9.0
 cap_z: 1.0 z >= 1.0
Bounds
 IN.gas <= 5.0
 OUT.heat >= -1.0
 z free
End
";
        assert_eq!(text, expected);
    }
}
