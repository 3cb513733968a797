//! Scenario documents (JSON) and series files.

mod document;
mod series;

use std::path::{Path, PathBuf};

pub use document::{
    CarrierDoc, Document, EfficiencyDoc, GridDoc, HubDoc, LimitDoc, NetworkDoc, PortDoc, ProcessDoc, SeriesDoc, ShareDoc,
    SolarDoc, StorageDoc, WindDoc, SCHEMA_VERSION,
};
pub use series::{format_series, load_series, parse_series};

use crate::model::{
    renewable_limit_series, validate, Carrier, Diagnostic, Efficiency, FlowLimit, Hub, Network, Port, Process,
    RenewableLaw, Scenario, Share, StorageUnit, TimeGrid,
};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{path}: unsupported schema_version {found}, expected {SCHEMA_VERSION}")]
    Schema { path: String, found: u32 },
    #[error("{path}: {message}")]
    Grid { path: String, message: String },
    #[error("{path} line {line}: {message}")]
    Series { path: String, line: usize, message: String },
    #[error("{path}: series has {found} values, the time grid has {expected}")]
    SeriesLength { path: String, found: usize, expected: usize },
    #[error("{path}: {diagnostic}")]
    Diagnostic { path: String, diagnostic: Diagnostic },
}

impl IoError {
    fn read(path: &Path, source: std::io::Error) -> Self {
        IoError::Read { path: path.display().to_string(), source }
    }

    /// Short machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            IoError::Read { .. } => "READ",
            IoError::Write { .. } => "WRITE",
            IoError::Parse { .. } => "PARSE",
            IoError::Schema { .. } => "SCHEMA_VERSION",
            IoError::Grid { .. } => "GRID_STEP",
            IoError::Series { .. } => "SERIES_ROW",
            IoError::SeriesLength { .. } => "SERIES_LENGTH",
            IoError::Diagnostic { diagnostic, .. } => diagnostic.code.as_str(),
        }
    }
}

/// A parsed scenario and its validation diagnostics.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn load_scenario(path: &Path) -> Result<LoadedScenario, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::read(path, e))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_scenario(&text, &base, &path.display().to_string())
}

/// Parses document text; file references resolve against `base`.
pub fn parse_scenario(text: &str, base: &Path, origin: &str) -> Result<LoadedScenario, IoError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| IoError::Parse {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let scenario = from_document(&doc, base, origin)?;
    let diagnostics = validate(&scenario);
    Ok(LoadedScenario { scenario, diagnostics })
}

struct Resolver<'a> {
    base: &'a Path,
    origin: &'a str,
    grid: &'a TimeGrid,
}

impl Resolver<'_> {
    fn series(&self, doc: &SeriesDoc) -> Result<Vec<f64>, IoError> {
        match doc {
            SeriesDoc::Inline(v) => Ok(v.clone()),
            SeriesDoc::Constant(c) => Ok(vec![*c; self.grid.len()]),
            SeriesDoc::File(rel) => load_series(&self.path(rel), self.grid),
            SeriesDoc::Wind(w) => {
                let law = RenewableLaw::Wind { coefficient: w.coefficient, cut_in: w.cut_in, cut_off: w.cut_off };
                self.law(&law, &w.speed)
            }
            SeriesDoc::Solar(s) => self.law(&RenewableLaw::Solar { area: s.area }, &s.irradiance),
        }
    }

    fn law(&self, law: &RenewableLaw, weather: &SeriesDoc) -> Result<Vec<f64>, IoError> {
        let w = self.series(weather)?;
        renewable_limit_series(law, &w).map_err(|diagnostic| IoError::Diagnostic { path: self.origin.to_string(), diagnostic })
    }

    fn opt(&self, doc: &Option<SeriesDoc>) -> Result<Option<Vec<f64>>, IoError> {
        doc.as_ref().map(|d| self.series(d)).transpose()
    }

    fn path(&self, rel: &str) -> PathBuf {
        self.base.join(rel)
    }
}

fn grid_from(doc: &GridDoc, origin: &str) -> Result<TimeGrid, IoError> {
    let err = |m: &str| IoError::Grid { path: origin.to_string(), message: m.to_string() };
    match (doc.count, doc.step_hours, &doc.steps_hours) {
        (Some(n), Some(dt), None) => Ok(TimeGrid::uniform(n, dt)),
        (None, None, Some(steps)) => Ok(TimeGrid { steps: steps.clone() }),
        _ => Err(err("time_grid takes either `count` and `step_hours`, or `steps_hours`")),
    }
}

fn shares(docs: &[ShareDoc]) -> Vec<Share> {
    docs.iter().map(|s| Share { carrier: s.carrier.clone(), fraction: s.fraction }).collect()
}

pub fn from_document(doc: &Document, base: &Path, origin: &str) -> Result<Scenario, IoError> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(IoError::Schema { path: origin.to_string(), found: doc.schema_version });
    }
    let grid = grid_from(&doc.time_grid, origin)?;
    let r = Resolver { base, origin, grid: &grid };
    let mut s = Scenario::new(&doc.name, grid.clone());
    s.carriers = doc
        .carriers
        .iter()
        .map(|c| Carrier { id: c.id.clone(), kind: c.kind, chemical_exergy: c.chemical_exergy })
        .collect();
    s.hubs = doc.hubs.iter().map(|h| Hub { id: h.id.clone() }).collect();
    for p in &doc.processes {
        let limits = p
            .limits
            .iter()
            .map(|l| {
                Ok(FlowLimit { carrier: l.carrier.clone(), side: l.side, max: r.series(&l.max)?, renewable: l.renewable })
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        s.processes.push(Process {
            id: p.id.clone(),
            hub: p.hub.clone(),
            efficiency: match p.efficiency {
                EfficiencyDoc::Plain(v) => Efficiency::Plain(v),
                EfficiencyDoc::Declared { value, unit } => Efficiency::Declared { value, unit },
            },
            inlets: shares(&p.inlets),
            outlets: shares(&p.outlets),
            limits,
        });
    }
    s.storages = doc
        .storages
        .iter()
        .map(|st| StorageUnit {
            id: st.id.clone(),
            hub: st.hub.clone(),
            carrier: st.carrier.clone(),
            round_trip_efficiency: st.round_trip_efficiency,
            capacity: st.capacity,
            max_charge_rate: st.max_charge_rate,
            max_discharge_rate: st.max_discharge_rate,
            initial_soc: st.initial_soc,
            terminal_policy: st.terminal_policy,
        })
        .collect();
    for p in &doc.ports {
        s.ports.push(Port {
            hub: p.hub.clone(),
            carrier: p.carrier.clone(),
            kind: p.kind,
            price: r.opt(&p.price)?,
            max: r.opt(&p.max)?,
            min: r.opt(&p.min)?,
            load: r.opt(&p.load)?,
        });
    }
    s.networks = doc
        .networks
        .iter()
        .map(|n| Network { carrier: n.carrier.clone(), hubs: n.hubs.clone(), loss_fraction: n.loss_fraction })
        .collect();
    Ok(s)
}

/// Document with every series written inline.
pub fn to_document(s: &Scenario) -> Document {
    let inline = |v: &Vec<f64>| SeriesDoc::Inline(v.clone());
    let share_docs = |v: &[Share]| v.iter().map(|x| ShareDoc { carrier: x.carrier.clone(), fraction: x.fraction }).collect();
    let time_grid = match s.time_grid.uniform_step() {
        Some(dt) => GridDoc { count: Some(s.time_grid.len()), step_hours: Some(dt), steps_hours: None },
        None => GridDoc { count: None, step_hours: None, steps_hours: Some(s.time_grid.steps.clone()) },
    };
    Document {
        schema_version: SCHEMA_VERSION,
        name: s.name.clone(),
        time_grid,
        carriers: s
            .carriers
            .iter()
            .map(|c| CarrierDoc { id: c.id.clone(), kind: c.kind, chemical_exergy: c.chemical_exergy })
            .collect(),
        hubs: s.hubs.iter().map(|h| HubDoc { id: h.id.clone() }).collect(),
        processes: s
            .processes
            .iter()
            .map(|p| ProcessDoc {
                id: p.id.clone(),
                hub: p.hub.clone(),
                efficiency: match p.efficiency {
                    Efficiency::Plain(v) => EfficiencyDoc::Plain(v),
                    Efficiency::Declared { value, unit } => EfficiencyDoc::Declared { value, unit },
                },
                inlets: share_docs(&p.inlets),
                outlets: share_docs(&p.outlets),
                limits: p
                    .limits
                    .iter()
                    .map(|l| LimitDoc { carrier: l.carrier.clone(), side: l.side, max: inline(&l.max), renewable: l.renewable })
                    .collect(),
            })
            .collect(),
        storages: s
            .storages
            .iter()
            .map(|st| StorageDoc {
                id: st.id.clone(),
                hub: st.hub.clone(),
                carrier: st.carrier.clone(),
                round_trip_efficiency: st.round_trip_efficiency,
                capacity: st.capacity,
                max_charge_rate: st.max_charge_rate,
                max_discharge_rate: st.max_discharge_rate,
                initial_soc: st.initial_soc,
                terminal_policy: st.terminal_policy,
            })
            .collect(),
        ports: s
            .ports
            .iter()
            .map(|p| PortDoc {
                hub: p.hub.clone(),
                carrier: p.carrier.clone(),
                kind: p.kind,
                price: p.price.as_ref().map(inline),
                max: p.max.as_ref().map(inline),
                min: p.min.as_ref().map(inline),
                load: p.load.as_ref().map(inline),
            })
            .collect(),
        networks: s
            .networks
            .iter()
            .map(|n| NetworkDoc { carrier: n.carrier.clone(), hubs: n.hubs.clone(), loss_fraction: n.loss_fraction })
            .collect(),
    }
}

pub fn scenario_to_json(s: &Scenario) -> String {
    let mut text = serde_json::to_string_pretty(&to_document(s)).expect("documents always serialize");
    text.push('\n');
    text
}

pub fn save_scenario(s: &Scenario, path: &Path) -> Result<(), IoError> {
    std::fs::write(path, scenario_to_json(s)).map_err(|e| IoError::Write { path: path.display().to_string(), source: e })
}
