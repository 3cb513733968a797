//! Domain types for networks of multi-carrier hubs.
//!
//! Flow units in a [`Scenario`] are the document units: kW for energy
//! carriers, kg/s for material carriers (prices in €/kWh and €/kg). Storage
//! quantities are kWh and kW for every carrier, exergy-kWh for materials.
//! Conversion to the uniform exergy convention happens in the LP builder via
//! [`Scenario::kw_per_unit`].

mod diagnostics;
mod index_sets;
mod units;
mod validate;

use serde::{Deserialize, Serialize};

pub use diagnostics::{Diagnostic, DiagnosticCode, Severity};
pub use index_sets::{derive_index_sets, HubSets, IndexSets};
pub use units::{exergy_flow, renewable_limit_series, resolve_efficiency, RenewableLaw, SECONDS_PER_HOUR};
pub use validate::{has_fatal, validate};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ModelError {
    #[error("carrier '{0}' is not a material carrier with a chemical exergy")]
    NotMaterial(String),
    #[error("unknown {kind} '{id}'")]
    Unknown { kind: &'static str, id: String },
    #[error("scenario has fatal diagnostics: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CarrierKind {
    Energy,
    Material,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Carrier {
    pub id: String,
    pub kind: CarrierKind,
    /// J/kg, materials only.
    pub chemical_exergy: Option<f64>,
}

impl Carrier {
    pub fn energy(id: &str) -> Self {
        Carrier { id: id.to_string(), kind: CarrierKind::Energy, chemical_exergy: None }
    }

    pub fn material(id: &str, chemical_exergy: f64) -> Self {
        Carrier { id: id.to_string(), kind: CarrierKind::Material, chemical_exergy: Some(chemical_exergy) }
    }

    pub fn is_material(&self) -> bool {
        self.kind == CarrierKind::Material
    }
}

/// Step durations in hours.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    pub steps: Vec<f64>,
}

impl TimeGrid {
    pub fn uniform(count: usize, step_hours: f64) -> Self {
        TimeGrid { steps: vec![step_hours; count] }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn total_hours(&self) -> f64 {
        self.steps.iter().sum()
    }

    /// `Some(dt)` when every step has the same duration.
    pub fn uniform_step(&self) -> Option<f64> {
        let first = *self.steps.first()?;
        self.steps.iter().all(|&s| s == first).then_some(first)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoefficientUnit {
    #[serde(rename = "kW/kW")]
    KwPerKw,
    /// Mass of the (single, material) outlet per kWh of inlet.
    #[serde(rename = "kg/kWh")]
    KgPerKwh,
    /// kWh of outlet per kg of the (single, material) inlet.
    #[serde(rename = "kWh/kg")]
    KwhPerKg,
    #[serde(rename = "kg/kg")]
    KgPerKg,
}

impl CoefficientUnit {
    pub fn as_str(self) -> &'static str {
        match self {
            CoefficientUnit::KwPerKw => "kW/kW",
            CoefficientUnit::KgPerKwh => "kg/kWh",
            CoefficientUnit::KwhPerKg => "kWh/kg",
            CoefficientUnit::KgPerKg => "kg/kg",
        }
    }
}

/// Ratio of total outlet to total inlet flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Efficiency {
    /// Dimensionless, in (0, 1].
    Plain(f64),
    /// Unit-bearing coefficient, converted to exergy terms at validation.
    Declared { value: f64, unit: CoefficientUnit },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Share {
    pub carrier: String,
    pub fraction: f64,
}

impl Share {
    pub fn new(carrier: &str, fraction: f64) -> Self {
        Share { carrier: carrier.to_string(), fraction }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Inlet,
    Outlet,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Inlet => "inlet",
            Side::Outlet => "outlet",
        }
    }
}

/// Upper bound on one carrier's flow through a process.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowLimit {
    pub carrier: String,
    pub side: Side,
    pub max: Vec<f64>,
    /// Availability of a renewable resource; the unused part is curtailment.
    pub renewable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Process {
    pub id: String,
    pub hub: String,
    pub efficiency: Efficiency,
    pub inlets: Vec<Share>,
    pub outlets: Vec<Share>,
    pub limits: Vec<FlowLimit>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TerminalPolicy {
    Free,
    Cyclic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StorageUnit {
    pub id: String,
    pub hub: String,
    pub carrier: String,
    pub round_trip_efficiency: f64,
    /// kWh (exergy-kWh for materials).
    pub capacity: f64,
    /// kW.
    pub max_charge_rate: f64,
    pub max_discharge_rate: f64,
    pub initial_soc: f64,
    pub terminal_policy: TerminalPolicy,
}

impl StorageUnit {
    /// One-leg efficiency, the square root of the round trip.
    pub fn leg_efficiency(&self) -> f64 {
        self.round_trip_efficiency.sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PortKind {
    Import,
    Export,
    Network,
    Return,
    Load,
}

impl PortKind {
    pub const ALL: [PortKind; 5] = [PortKind::Import, PortKind::Export, PortKind::Network, PortKind::Return, PortKind::Load];

    pub fn as_str(self) -> &'static str {
        match self {
            PortKind::Import => "import",
            PortKind::Export => "export",
            PortKind::Network => "network",
            PortKind::Return => "return",
            PortKind::Load => "load",
        }
    }

    pub fn parse(s: &str) -> Option<PortKind> {
        PortKind::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Port {
    pub hub: String,
    pub carrier: String,
    pub kind: PortKind,
    pub price: Option<Vec<f64>>,
    pub max: Option<Vec<f64>>,
    pub min: Option<Vec<f64>>,
    pub load: Option<Vec<f64>>,
}

impl Port {
    pub fn new(hub: &str, carrier: &str, kind: PortKind) -> Self {
        Port { hub: hub.to_string(), carrier: carrier.to_string(), kind, price: None, max: None, min: None, load: None }
    }

    pub fn with_price(mut self, price: Vec<f64>) -> Self {
        self.price = Some(price);
        self
    }

    pub fn with_max(mut self, max: Vec<f64>) -> Self {
        self.max = Some(max);
        self
    }

    pub fn with_min(mut self, min: Vec<f64>) -> Self {
        self.min = Some(min);
        self
    }

    pub fn with_load(mut self, load: Vec<f64>) -> Self {
        self.load = Some(load);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub carrier: String,
    pub hubs: Vec<String>,
    pub loss_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hub {
    pub id: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub time_grid: TimeGrid,
    pub carriers: Vec<Carrier>,
    pub hubs: Vec<Hub>,
    pub processes: Vec<Process>,
    pub storages: Vec<StorageUnit>,
    pub ports: Vec<Port>,
    pub networks: Vec<Network>,
}

impl Scenario {
    pub fn new(name: &str, time_grid: TimeGrid) -> Self {
        Scenario {
            name: name.to_string(),
            time_grid,
            carriers: Vec::new(),
            hubs: Vec::new(),
            processes: Vec::new(),
            storages: Vec::new(),
            ports: Vec::new(),
            networks: Vec::new(),
        }
    }

    pub fn carrier(&self, id: &str) -> Option<&Carrier> {
        self.carriers.iter().find(|c| c.id == id)
    }

    pub fn process(&self, id: &str) -> Option<&Process> {
        self.processes.iter().find(|p| p.id == id)
    }

    pub fn storage(&self, id: &str) -> Option<&StorageUnit> {
        self.storages.iter().find(|s| s.id == id)
    }

    pub fn port(&self, hub: &str, carrier: &str, kind: PortKind) -> Option<&Port> {
        self.ports.iter().find(|p| p.hub == hub && p.carrier == carrier && p.kind == kind)
    }

    pub fn network(&self, carrier: &str) -> Option<&Network> {
        self.networks.iter().find(|n| n.carrier == carrier)
    }

    /// kW of exergy per document flow unit: 1 for energy carriers,
    /// `E_ex / 1000` for materials given in kg/s.
    pub fn kw_per_unit(&self, carrier: &str) -> f64 {
        match self.carrier(carrier) {
            Some(Carrier { kind: CarrierKind::Material, chemical_exergy: Some(e), .. }) => e / 1000.0,
            _ => 1.0,
        }
    }

    /// kg per exergy-kWh for material carriers, `None` for energy carriers.
    pub fn kg_per_kwh(&self, carrier: &str) -> Option<f64> {
        match self.carrier(carrier) {
            Some(Carrier { kind: CarrierKind::Material, chemical_exergy: Some(e), .. }) => Some(SECONDS_PER_HOUR * 1000.0 / e),
            _ => None,
        }
    }

    /// Copy with every price series multiplied by `factor`.
    pub fn with_scaled_prices(&self, factor: f64) -> Scenario {
        let mut s = self.clone();
        for p in &mut s.ports {
            if let Some(price) = &mut p.price {
                price.iter_mut().for_each(|v| *v *= factor);
            }
        }
        s
    }

    /// Copy with every load series multiplied by `factor`.
    pub fn with_scaled_loads(&self, factor: f64) -> Scenario {
        let mut s = self.clone();
        for p in &mut s.ports {
            if let Some(load) = &mut p.load {
                load.iter_mut().for_each(|v| *v *= factor);
            }
        }
        s
    }
}
