//! Stable names for every LP column and row.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum VarKind {
    #[serde(rename = "IMP")]
    Imp,
    #[serde(rename = "EXP")]
    Exp,
    #[serde(rename = "RET")]
    Ret,
    #[serde(rename = "IN_TOTAL")]
    InTotal,
    #[serde(rename = "IN_PROC")]
    InProc,
    #[serde(rename = "OUT_TOTAL")]
    OutTotal,
    #[serde(rename = "OUT_PROC")]
    OutProc,
    #[serde(rename = "PROC_IN_SUM")]
    ProcInSum,
    #[serde(rename = "PROC_OUT_SUM")]
    ProcOutSum,
    #[serde(rename = "NET_IN")]
    NetIn,
    #[serde(rename = "NET_OUT")]
    NetOut,
    #[serde(rename = "STO_CHA")]
    StoCha,
    #[serde(rename = "STO_DIS")]
    StoDis,
    #[serde(rename = "SOC")]
    Soc,
}

impl VarKind {
    pub const ALL: [VarKind; 14] = [
        VarKind::Imp,
        VarKind::Exp,
        VarKind::Ret,
        VarKind::InTotal,
        VarKind::InProc,
        VarKind::OutTotal,
        VarKind::OutProc,
        VarKind::ProcInSum,
        VarKind::ProcOutSum,
        VarKind::NetIn,
        VarKind::NetOut,
        VarKind::StoCha,
        VarKind::StoDis,
        VarKind::Soc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VarKind::Imp => "IMP",
            VarKind::Exp => "EXP",
            VarKind::Ret => "RET",
            VarKind::InTotal => "IN_TOTAL",
            VarKind::InProc => "IN_PROC",
            VarKind::OutTotal => "OUT_TOTAL",
            VarKind::OutProc => "OUT_PROC",
            VarKind::ProcInSum => "PROC_IN_SUM",
            VarKind::ProcOutSum => "PROC_OUT_SUM",
            VarKind::NetIn => "NET_IN",
            VarKind::NetOut => "NET_OUT",
            VarKind::StoCha => "STO_CHA",
            VarKind::StoDis => "STO_DIS",
            VarKind::Soc => "SOC",
        }
    }

    pub fn parse(s: &str) -> Option<VarKind> {
        VarKind::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for VarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RowTag {
    #[serde(rename = "EQ3")]
    Eq3,
    #[serde(rename = "EQ4")]
    Eq4,
    #[serde(rename = "EQ5")]
    Eq5,
    #[serde(rename = "EQ6")]
    Eq6,
    #[serde(rename = "EQ7")]
    Eq7,
    #[serde(rename = "EQ8")]
    Eq8,
    #[serde(rename = "EQ9")]
    Eq9,
    #[serde(rename = "EQ10")]
    Eq10,
    #[serde(rename = "EQ11")]
    Eq11,
    #[serde(rename = "EQ12")]
    Eq12,
    #[serde(rename = "STO_DYN")]
    StoDyn,
    #[serde(rename = "STO_CYC")]
    StoCyc,
}

impl RowTag {
    pub const ALL: [RowTag; 12] = [
        RowTag::Eq3,
        RowTag::Eq4,
        RowTag::Eq5,
        RowTag::Eq6,
        RowTag::Eq7,
        RowTag::Eq8,
        RowTag::Eq9,
        RowTag::Eq10,
        RowTag::Eq11,
        RowTag::Eq12,
        RowTag::StoDyn,
        RowTag::StoCyc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RowTag::Eq3 => "EQ3",
            RowTag::Eq4 => "EQ4",
            RowTag::Eq5 => "EQ5",
            RowTag::Eq6 => "EQ6",
            RowTag::Eq7 => "EQ7",
            RowTag::Eq8 => "EQ8",
            RowTag::Eq9 => "EQ9",
            RowTag::Eq10 => "EQ10",
            RowTag::Eq11 => "EQ11",
            RowTag::Eq12 => "EQ12",
            RowTag::StoDyn => "STO_DYN",
            RowTag::StoCyc => "STO_CYC",
        }
    }
}

impl fmt::Display for RowTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Qualifiers of a column or row. `element` is the process or storage id;
/// `t` is the 0-based step.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Qualifiers {
    pub hub: Option<String>,
    pub carrier: Option<String>,
    pub element: Option<String>,
    pub t: usize,
}

impl Qualifiers {
    pub fn new(hub: Option<&str>, carrier: Option<&str>, element: Option<&str>, t: usize) -> Self {
        Qualifiers {
            hub: hub.map(str::to_string),
            carrier: carrier.map(str::to_string),
            element: element.map(str::to_string),
            t,
        }
    }
}

fn sanitize(part: &str) -> String {
    part.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect()
}

fn step_width(steps: usize) -> usize {
    steps.to_string().len().max(3)
}

/// `PREFIX.carrier.hub.element.t017`, skipping absent qualifiers.
fn compose(prefix: &str, q: &Qualifiers, width: usize) -> String {
    let mut name = prefix.to_string();
    for part in [&q.carrier, &q.hub, &q.element].into_iter().flatten() {
        name.push('.');
        name.push_str(&sanitize(part));
    }
    name.push_str(&format!(".t{:0width$}", q.t + 1));
    name
}

fn describe(prefix: &str, q: &Qualifiers) -> String {
    let mut parts = vec![prefix.to_string()];
    if let Some(h) = &q.hub {
        parts.push(format!("hub {h}"));
    }
    if let Some(e) = &q.element {
        parts.push(e.clone());
    }
    if let Some(c) = &q.carrier {
        parts.push(c.clone());
    }
    parts.push(format!("t = {}", q.t + 1));
    parts.join(", ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VarEntry {
    pub kind: VarKind,
    #[serde(flatten)]
    pub at: Qualifiers,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowEntry {
    pub tag: RowTag,
    #[serde(flatten)]
    pub at: Qualifiers,
}

/// Bijection between [`VarEntry`] values and column indices.
#[derive(Debug, Clone, Default)]
pub struct VariableCatalog {
    entries: Vec<VarEntry>,
    index: HashMap<(VarKind, Qualifiers), usize>,
    steps: usize,
}

impl VariableCatalog {
    pub fn new(steps: usize) -> Self {
        VariableCatalog { entries: Vec::new(), index: HashMap::new(), steps }
    }

    /// Registers a column; panics on a duplicate entry.
    pub fn push(&mut self, kind: VarKind, at: Qualifiers) -> usize {
        let col = self.entries.len();
        let prev = self.index.insert((kind, at.clone()), col);
        assert!(prev.is_none(), "duplicate catalog entry {kind} {at:?}");
        self.entries.push(VarEntry { kind, at });
        col
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[VarEntry] {
        &self.entries
    }

    pub fn entry(&self, col: usize) -> &VarEntry {
        &self.entries[col]
    }

    pub fn lookup(&self, kind: VarKind, hub: Option<&str>, carrier: Option<&str>, element: Option<&str>, t: usize) -> Option<usize> {
        self.index.get(&(kind, Qualifiers::new(hub, carrier, element, t))).copied()
    }

    pub fn name(&self, col: usize) -> String {
        let e = &self.entries[col];
        compose(e.kind.as_str(), &e.at, step_width(self.steps))
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.len()).map(|j| self.name(j)).collect()
    }

    pub fn count(&self, kind: VarKind) -> usize {
        self.entries.iter().filter(|e| e.kind == kind).count()
    }
}

/// Bijection between [`RowEntry`] values and row indices.
#[derive(Debug, Clone, Default)]
pub struct ConstraintCatalog {
    entries: Vec<RowEntry>,
    index: HashMap<(RowTag, Qualifiers), usize>,
    steps: usize,
}

impl ConstraintCatalog {
    pub fn new(steps: usize) -> Self {
        ConstraintCatalog { entries: Vec::new(), index: HashMap::new(), steps }
    }

    pub fn push(&mut self, tag: RowTag, at: Qualifiers) -> usize {
        let row = self.entries.len();
        let prev = self.index.insert((tag, at.clone()), row);
        assert!(prev.is_none(), "duplicate catalog entry {tag} {at:?}");
        self.entries.push(RowEntry { tag, at });
        row
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[RowEntry] {
        &self.entries
    }

    pub fn entry(&self, row: usize) -> &RowEntry {
        &self.entries[row]
    }

    pub fn lookup(&self, tag: RowTag, hub: Option<&str>, carrier: Option<&str>, element: Option<&str>, t: usize) -> Option<usize> {
        self.index.get(&(tag, Qualifiers::new(hub, carrier, element, t))).copied()
    }

    pub fn name(&self, row: usize) -> String {
        let e = &self.entries[row];
        compose(e.tag.as_str(), &e.at, step_width(self.steps))
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.len()).map(|i| self.name(i)).collect()
    }

    /// Readable location, e.g. `EQ6, hub hub2, heat, t = 17`.
    pub fn describe(&self, row: usize) -> String {
        let e = &self.entries[row];
        describe(e.tag.as_str(), &e.at)
    }

    pub fn count(&self, tag: RowTag) -> usize {
        self.entries.iter().filter(|e| e.tag == tag).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_padded_and_sanitized() {
        let mut v = VariableCatalog::new(168);
        let c = v.push(VarKind::Imp, Qualifiers::new(Some("hub2"), Some("gas"), None, 16));
        assert_eq!(v.name(c), "IMP.gas.hub2.t017");
        let d = v.push(VarKind::InProc, Qualifiers::new(Some("hub 1"), Some("h2-lp"), Some("comp"), 0));
        assert_eq!(v.name(d), "IN_PROC.h2_lp.hub_1.comp.t001");
        let mut long = VariableCatalog::new(1000);
        let s = long.push(VarKind::Soc, Qualifiers::new(Some("h"), None, Some("bat"), 9));
        assert_eq!(long.name(s), "SOC.h.bat.t0010");
    }

    #[test]
    fn lookup_round_trips() {
        let mut r = ConstraintCatalog::new(24);
        let a = r.push(RowTag::Eq6, Qualifiers::new(Some("hub2"), Some("heat"), None, 16));
        let b = r.push(RowTag::Eq12, Qualifiers::new(None, Some("elec"), None, 0));
        assert_eq!(r.lookup(RowTag::Eq6, Some("hub2"), Some("heat"), None, 16), Some(a));
        assert_eq!(r.lookup(RowTag::Eq12, None, Some("elec"), None, 0), Some(b));
        assert_eq!(r.describe(a), "EQ6, hub hub2, heat, t = 17");
        assert_eq!(r.name(b), "EQ12.elec.t001");
    }

    #[test]
    #[should_panic(expected = "duplicate")]
    fn duplicates_are_rejected() {
        let mut v = VariableCatalog::new(1);
        v.push(VarKind::Imp, Qualifiers::new(Some("h"), Some("gas"), None, 0));
        v.push(VarKind::Imp, Qualifiers::new(Some("h"), Some("gas"), None, 0));
    }
}
