//! CSV bundle and table-text renderings of a report.
//!
//! Bundle layout, one directory:
//! - `{hub}_{KIND}.csv`: `step` then one column per carrier (`carrier@element`
//!   for per-process and per-storage flows), exergy kW; material carriers
//!   get an extra `label[kg/s]` column
//! - `{hub}_SOC.csv`: `step` then one column per storage, kWh
//! - `totals.csv`: `hub,port_kind,carrier,total_kwh,total_kg`
//! - `costs.csv`: `hub,port_kind,carrier,cost_eur`
//! - `curtailment.csv`: `process,hub,carrier,side,limit_kwh,scheduled_kwh,curtailed_kwh`
//! - `audit.csv`: `check,severity,subject,value,message`
//! - `summary.csv`: `key,value`
//!
//! Numbers use the shortest text that reads back to the same value.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::{AuditReport, Check, Finding, PortTotal, ReportError, ScheduleReport};
use crate::model::{PortKind, Severity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    TableText,
    CsvBundle,
}

fn num(v: f64) -> String {
    if v == 0.0 {
        "0.0".into()
    } else {
        format!("{v:?}")
    }
}

struct Sheet {
    rows: Vec<Vec<String>>,
}

impl Sheet {
    fn new(header: &[&str]) -> Self {
        Sheet { rows: vec![header.iter().map(|s| s.to_string()).collect()] }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn write(&self, path: &Path) -> Result<(), ReportError> {
        let err = |e: csv::Error| ReportError::Write {
            path: path.display().to_string(),
            source: std::io::Error::other(e.to_string()),
        };
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path).map_err(err)?;
        for r in &self.rows {
            w.write_record(r).map_err(err)?;
        }
        w.flush().map_err(|e| ReportError::Write { path: path.display().to_string(), source: e })
    }
}

fn series_sheet(columns: &[(String, &[f64])], steps: usize) -> Sheet {
    let mut header = vec!["step"];
    header.extend(columns.iter().map(|(l, _)| l.as_str()));
    let mut sheet = Sheet::new(&header);
    for t in 0..steps {
        let mut row = vec![(t + 1).to_string()];
        row.extend(columns.iter().map(|(_, v)| num(v[t])));
        sheet.push(row);
    }
    sheet
}

/// Writes the report; returns the written file names, sorted.
pub fn emit_report(report: &ScheduleReport, audit: &AuditReport, format: ReportFormat, path: &Path) -> Result<Vec<PathBuf>, ReportError> {
    match format {
        ReportFormat::TableText => {
            let text = format!("{}\n{}", render_totals(&report.totals), render_audit(audit));
            std::fs::write(path, text).map_err(|e| ReportError::Write { path: path.display().to_string(), source: e })?;
            Ok(vec![path.to_path_buf()])
        }
        ReportFormat::CsvBundle => emit_bundle(report, audit, path),
    }
}

fn emit_bundle(report: &ScheduleReport, audit: &AuditReport, dir: &Path) -> Result<Vec<PathBuf>, ReportError> {
    std::fs::create_dir_all(dir).map_err(|e| ReportError::Write { path: dir.display().to_string(), source: e })?;
    let steps = report.steps.len();
    let mut sheets: BTreeMap<String, Sheet> = BTreeMap::new();

    let mut groups: BTreeMap<(String, &'static str), Vec<(String, Vec<f64>)>> = BTreeMap::new();
    for f in &report.flows {
        let cols = groups.entry((f.hub.clone(), f.kind.as_str())).or_default();
        cols.push((f.label(), f.kw.clone()));
        if let Some(kg) = f.mass_flow() {
            cols.push((format!("{}[kg/s]", f.label()), kg));
        }
    }
    for s in &report.soc {
        groups.entry((s.hub.clone(), "SOC")).or_default().push((s.storage.clone(), s.kwh.clone()));
    }
    for ((hub, kind), cols) in groups {
        let view: Vec<(String, &[f64])> = cols.iter().map(|(l, v)| (l.clone(), v.as_slice())).collect();
        sheets.insert(format!("{hub}_{kind}.csv"), series_sheet(&view, steps));
    }

    let mut totals = Sheet::new(&["hub", "port_kind", "carrier", "total_kwh", "total_kg"]);
    for t in &report.totals {
        totals.push(vec![
            t.hub.clone(),
            t.kind.as_str().into(),
            t.carrier.clone(),
            num(t.total_kwh),
            t.total_kg.map(num).unwrap_or_default(),
        ]);
    }
    sheets.insert("totals.csv".into(), totals);

    let mut costs = Sheet::new(&["hub", "port_kind", "carrier", "cost_eur"]);
    for c in &report.costs {
        costs.push(vec![c.hub.clone(), c.kind.as_str().into(), c.carrier.clone(), num(c.cost)]);
    }
    sheets.insert("costs.csv".into(), costs);

    let mut curt = Sheet::new(&["process", "hub", "carrier", "side", "limit_kwh", "scheduled_kwh", "curtailed_kwh"]);
    for c in &report.curtailment {
        curt.push(vec![
            c.process.clone(),
            c.hub.clone(),
            c.carrier.clone(),
            c.side.as_str().into(),
            num(report.integrate(&c.limit)),
            num(report.integrate(&c.scheduled)),
            num(c.total_kwh(&report.steps)),
        ]);
    }
    sheets.insert("curtailment.csv".into(), curt);

    let mut aud = Sheet::new(&["check", "severity", "subject", "value", "message"]);
    for f in &audit.findings {
        aud.push(vec![f.check.as_str().into(), f.severity.as_str().into(), f.subject.clone(), num(f.value), f.message.clone()]);
    }
    sheets.insert("audit.csv".into(), aud);

    let mut summary = Sheet::new(&["key", "value"]);
    summary.push(vec!["scenario".into(), report.scenario.clone()]);
    summary.push(vec!["objective_eur".into(), num(report.objective)]);
    summary.push(vec!["steps".into(), steps.to_string()]);
    summary.push(vec!["hours".into(), num(report.steps.iter().sum())]);
    summary.push(vec!["loss_orientation".into(), report.loss_orientation.as_str().into()]);
    sheets.insert("summary.csv".into(), summary);

    let mut written = Vec::new();
    for (name, sheet) in &sheets {
        sheet.write(&dir.join(name))?;
        written.push(PathBuf::from(name));
    }
    Ok(written)
}

fn read_records(path: &Path, header: &[&str]) -> Result<Vec<(usize, csv::StringRecord)>, ReportError> {
    let text = std::fs::read_to_string(path).map_err(|e| ReportError::Read { path: path.display().to_string(), source: e })?;
    let corrupt = |line: usize, message: String| ReportError::Corrupt { path: path.display().to_string(), line, message };
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| corrupt(i + 1, e.to_string()))?;
        let line = rec.position().map_or(i + 1, |p| p.line() as usize);
        if i == 0 {
            if rec.iter().ne(header.iter().copied()) {
                return Err(corrupt(line, format!("expected header {}", header.join(","))));
            }
            continue;
        }
        if rec.len() != header.len() {
            return Err(corrupt(line, format!("expected {} fields, found {}", header.len(), rec.len())));
        }
        out.push((line, rec));
    }
    if out.is_empty() && text.trim().is_empty() {
        return Err(corrupt(1, "empty file".into()));
    }
    Ok(out)
}

fn parse_num(path: &Path, line: usize, s: &str) -> Result<f64, ReportError> {
    s.parse().map_err(|_| ReportError::Corrupt { path: path.display().to_string(), line, message: format!("'{s}' is not a number") })
}

pub fn read_totals(path: &Path) -> Result<Vec<PortTotal>, ReportError> {
    let mut out = Vec::new();
    for (line, r) in read_records(path, &["hub", "port_kind", "carrier", "total_kwh", "total_kg"])? {
        let kind = PortKind::parse(&r[1]).ok_or_else(|| ReportError::Corrupt {
            path: path.display().to_string(),
            line,
            message: format!("unknown port kind '{}'", &r[1]),
        })?;
        let total_kg = if r[4].is_empty() { None } else { Some(parse_num(path, line, &r[4])?) };
        out.push(PortTotal { hub: r[0].into(), kind, carrier: r[2].into(), total_kwh: parse_num(path, line, &r[3])?, total_kg });
    }
    Ok(out)
}

pub fn read_audit(path: &Path) -> Result<AuditReport, ReportError> {
    let mut findings = Vec::new();
    for (line, r) in read_records(path, &["check", "severity", "subject", "value", "message"])? {
        let bad = |what: &str| ReportError::Corrupt { path: path.display().to_string(), line, message: format!("unknown {what}") };
        findings.push(Finding {
            check: Check::parse(&r[0]).ok_or_else(|| bad("check"))?,
            severity: Severity::parse(&r[1]).ok_or_else(|| bad("severity"))?,
            subject: r[2].into(),
            value: parse_num(path, line, &r[3])?,
            message: r[4].into(),
        });
    }
    Ok(AuditReport { findings })
}

/// Aligned totals table, one line per port.
pub fn render_totals(totals: &[PortTotal]) -> String {
    let mut rows = vec![["hub".to_string(), "port".into(), "carrier".into(), "total kWh".into(), "total kg".into()]];
    for t in totals {
        rows.push([
            t.hub.clone(),
            t.kind.as_str().into(),
            t.carrier.clone(),
            format!("{:.6e}", t.total_kwh + 0.0),
            t.total_kg.map(|v| format!("{:.6e}", v + 0.0)).unwrap_or_default(),
        ]);
    }
    let mut widths = [0usize; 5];
    for r in &rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for r in &rows {
        let line = format!(
            "{:<w0$}  {:<w1$}  {:<w2$}  {:>w3$}  {:>w4$}",
            r[0],
            r[1],
            r[2],
            r[3],
            r[4],
            w0 = widths[0],
            w1 = widths[1],
            w2 = widths[2],
            w3 = widths[3],
            w4 = widths[4]
        );
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn render_audit(audit: &AuditReport) -> String {
    audit.findings.iter().map(|f| format!("{f}\n")).collect()
}
