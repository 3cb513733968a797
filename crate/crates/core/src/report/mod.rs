//! Named schedules, horizon totals, costs and audits from a solved model.

mod audit;
mod emit;

use std::collections::BTreeMap;

pub use audit::{audit, AuditReport, Check, Finding, CLOSURE_TOLERANCE};
pub use emit::{emit_report, read_audit, read_totals, render_audit, render_totals, ReportFormat};

use crate::builder::{BuiltModel, LossOrientation, VarKind};
use crate::lp::{Solution, SolveStatus};
use crate::model::{PortKind, Scenario, Side};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("no schedule for a solve that ended {0}")]
    NotOptimal(String),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{path}:{line}: {message}")]
    Corrupt { path: String, line: usize, message: String },
}

/// One catalog symbol over the horizon, in exergy kW.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSeries {
    pub kind: VarKind,
    pub hub: String,
    pub carrier: Option<String>,
    /// Process or storage id.
    pub element: Option<String>,
    pub kw: Vec<f64>,
    /// kW per document unit: 1 for energy, `E_ex / 1000` for materials.
    pub kw_per_unit: f64,
    pub material: bool,
}

impl FlowSeries {
    /// Column label inside a `{hub}_{KIND}` file.
    pub fn label(&self) -> String {
        match (&self.carrier, &self.element) {
            (Some(c), Some(e)) => format!("{c}@{e}"),
            (Some(c), None) => c.clone(),
            (None, Some(e)) => e.clone(),
            (None, None) => String::new(),
        }
    }

    /// kg/s for material carriers.
    pub fn mass_flow(&self) -> Option<Vec<f64>> {
        self.material.then(|| self.kw.iter().map(|v| v / self.kw_per_unit).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SocSeries {
    pub storage: String,
    pub hub: String,
    pub carrier: String,
    pub kwh: Vec<f64>,
}

/// Horizon total of one port. Network totals are signed: injection into
/// the network positive, extraction negative.
#[derive(Debug, Clone, PartialEq)]
pub struct PortTotal {
    pub hub: String,
    pub kind: PortKind,
    pub carrier: String,
    pub total_kwh: f64,
    pub total_kg: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostLine {
    pub hub: String,
    pub carrier: String,
    pub kind: PortKind,
    /// €; export revenue is negative.
    pub cost: f64,
}

/// Unused availability of a renewable-limited process flow, kW.
#[derive(Debug, Clone, PartialEq)]
pub struct Curtailment {
    pub process: String,
    pub hub: String,
    pub carrier: String,
    pub side: Side,
    pub limit: Vec<f64>,
    pub scheduled: Vec<f64>,
    pub curtailed: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleReport {
    pub scenario: String,
    /// Step lengths, hours.
    pub steps: Vec<f64>,
    pub objective: f64,
    pub loss_orientation: LossOrientation,
    pub flows: Vec<FlowSeries>,
    pub soc: Vec<SocSeries>,
    pub totals: Vec<PortTotal>,
    pub costs: Vec<CostLine>,
    pub curtailment: Vec<Curtailment>,
}

impl ScheduleReport {
    /// Σ_t v_t·Δt_t.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.steps).map(|(v, dt)| v * dt).sum()
    }

    pub fn flow(&self, kind: VarKind, hub: &str, carrier: Option<&str>, element: Option<&str>) -> Option<&FlowSeries> {
        self.flows
            .iter()
            .find(|f| f.kind == kind && f.hub == hub && f.carrier.as_deref() == carrier && f.element.as_deref() == element)
    }

    pub fn total(&self, hub: &str, kind: PortKind, carrier: &str) -> Option<&PortTotal> {
        self.totals.iter().find(|t| t.hub == hub && t.kind == kind && t.carrier == carrier)
    }
}

impl Curtailment {
    pub fn total_kwh(&self, steps: &[f64]) -> f64 {
        self.curtailed.iter().zip(steps).map(|(v, dt)| v * dt).sum()
    }
}

/// Port kinds in totals order.
pub const TOTAL_KINDS: [PortKind; 4] = [PortKind::Import, PortKind::Return, PortKind::Network, PortKind::Export];

type SeriesKey = (VarKind, String, Option<String>, Option<String>);

pub fn extract_schedules(solution: &Solution, model: &BuiltModel, scenario: &Scenario) -> Result<ScheduleReport, ReportError> {
    if solution.status != SolveStatus::Optimal {
        return Err(ReportError::NotOptimal(solution.status.as_str().to_string()));
    }
    let steps = scenario.time_grid.steps.clone();
    let t_len = steps.len();
    let x = &solution.values;

    let mut order: Vec<SeriesKey> = Vec::new();
    let mut series: BTreeMap<SeriesKey, Vec<f64>> = BTreeMap::new();
    for (j, e) in model.variables.entries().iter().enumerate() {
        let key = (e.kind, e.at.hub.clone().unwrap_or_default(), e.at.carrier.clone(), e.at.element.clone());
        let slot = series.entry(key.clone()).or_insert_with(|| {
            order.push(key);
            vec![0.0; t_len]
        });
        slot[e.at.t] = x[j];
    }

    let mut flows = Vec::new();
    let mut soc = Vec::new();
    for key in order {
        let values = series.remove(&key).expect("every key was inserted");
        let (kind, hub, carrier, element) = key;
        if kind == VarKind::Soc {
            let id = element.expect("storage columns carry their id");
            let st = scenario.storage(&id).expect("known storage");
            soc.push(SocSeries { storage: id, hub, carrier: st.carrier.clone(), kwh: values });
            continue;
        }
        let (kw_per_unit, material) = match carrier.as_deref().and_then(|c| scenario.carrier(c)) {
            Some(c) if c.is_material() => (scenario.kw_per_unit(&c.id), true),
            _ => (1.0, false),
        };
        flows.push(FlowSeries { kind, hub, carrier, element, kw: values, kw_per_unit, material });
    }

    let mut report = ScheduleReport {
        scenario: scenario.name.clone(),
        steps,
        objective: solution.objective,
        loss_orientation: model.options.loss_orientation,
        flows,
        soc,
        totals: Vec::new(),
        costs: Vec::new(),
        curtailment: Vec::new(),
    };
    report.totals = port_totals(&report, scenario);
    report.costs = cost_lines(solution, model);
    report.curtailment = curtailment(&report, scenario);
    Ok(report)
}

fn port_totals(report: &ScheduleReport, scenario: &Scenario) -> Vec<PortTotal> {
    let mut ports: Vec<_> = scenario.ports.iter().filter(|p| TOTAL_KINDS.contains(&p.kind)).collect();
    let rank = |k: PortKind| TOTAL_KINDS.iter().position(|x| *x == k).unwrap();
    ports.sort_by(|a, b| (&a.hub, rank(a.kind), &a.carrier).cmp(&(&b.hub, rank(b.kind), &b.carrier)));
    ports
        .into_iter()
        .map(|p| {
            let sum = |kind| report.flow(kind, &p.hub, Some(&p.carrier), None).map_or(0.0, |f| report.integrate(&f.kw));
            let total_kwh = match p.kind {
                PortKind::Import => sum(VarKind::Imp),
                PortKind::Return => sum(VarKind::Ret),
                PortKind::Export => sum(VarKind::Exp),
                PortKind::Network => sum(VarKind::NetIn) - sum(VarKind::NetOut),
                PortKind::Load => unreachable!(),
            };
            let total_kg = scenario.kg_per_kwh(&p.carrier).map(|k| total_kwh * k);
            PortTotal { hub: p.hub.clone(), kind: p.kind, carrier: p.carrier.clone(), total_kwh, total_kg }
        })
        .collect()
}

fn cost_lines(solution: &Solution, model: &BuiltModel) -> Vec<CostLine> {
    let mut lines: BTreeMap<(String, String, u8), f64> = BTreeMap::new();
    for (j, e) in model.variables.entries().iter().enumerate() {
        let tag = match e.kind {
            VarKind::Imp => 0,
            VarKind::Exp => 1,
            _ => continue,
        };
        let key = (e.at.hub.clone().unwrap_or_default(), e.at.carrier.clone().unwrap_or_default(), tag);
        *lines.entry(key).or_insert(0.0) += model.lp.objective()[j] * solution.values[j];
    }
    lines
        .into_iter()
        .map(|((hub, carrier, tag), cost)| CostLine {
            hub,
            carrier,
            kind: if tag == 0 { PortKind::Import } else { PortKind::Export },
            cost,
        })
        .collect()
}

fn curtailment(report: &ScheduleReport, scenario: &Scenario) -> Vec<Curtailment> {
    let mut out = Vec::new();
    for p in &scenario.processes {
        for l in p.limits.iter().filter(|l| l.renewable) {
            let kind = match l.side {
                Side::Inlet => VarKind::InProc,
                Side::Outlet => VarKind::OutProc,
            };
            let k = scenario.kw_per_unit(&l.carrier);
            let limit: Vec<f64> = l.max.iter().map(|v| v * k).collect();
            let scheduled = report
                .flow(kind, &p.hub, Some(&l.carrier), Some(&p.id))
                .map_or_else(|| vec![0.0; limit.len()], |f| f.kw.clone());
            let curtailed = limit.iter().zip(&scheduled).map(|(a, b)| a - b).collect();
            out.push(Curtailment {
                process: p.id.clone(),
                hub: p.hub.clone(),
                carrier: l.carrier.clone(),
                side: l.side,
                limit,
                scheduled,
                curtailed,
            });
        }
    }
    out
}
