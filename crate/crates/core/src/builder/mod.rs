//! Assembly of the scheduling LP from a validated scenario.
//!
//! Columns and rows are laid out step by step: for each `t`, hubs in id
//! order, then network rows for `t`; cyclic storage rows come last. All
//! flows are exergy kW; material document units are converted with the
//! carrier's chemical exergy.

mod catalog;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use catalog::{ConstraintCatalog, Qualifiers, RowEntry, RowTag, VarEntry, VarKind, VariableCatalog};

use crate::lp::{LinearProgram, LpNames, Relation};
use crate::model::{
    derive_index_sets, has_fatal, resolve_efficiency, validate, Diagnostic, IndexSets, PortKind, Scenario, Side,
    TerminalPolicy,
};

/// Direction of the network loss factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossOrientation {
    /// Injections exceed extractions: `Σ in = (1 + f) Σ out`.
    #[default]
    Physical,
    /// Literal reading: `Σ out = (1 + f) Σ in`.
    Paper,
}

impl LossOrientation {
    pub fn as_str(self) -> &'static str {
        match self {
            LossOrientation::Physical => "physical",
            LossOrientation::Paper => "paper",
        }
    }
}

impl fmt::Display for LossOrientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LossOrientation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "physical" => Ok(LossOrientation::Physical),
            "paper" => Ok(LossOrientation::Paper),
            other => Err(format!("unknown loss orientation '{other}' (expected paper or physical)")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    pub loss_orientation: LossOrientation,
}

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error("scenario has fatal diagnostics: {}", summary(.0))]
    Invalid(Vec<Diagnostic>),
}

fn summary(d: &[Diagnostic]) -> String {
    let codes: BTreeSet<&str> = d.iter().filter(|x| x.is_fatal()).map(|x| x.code.as_str()).collect();
    codes.into_iter().collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone)]
pub struct BuiltModel {
    pub lp: LinearProgram,
    pub variables: VariableCatalog,
    pub constraints: ConstraintCatalog,
    pub index_sets: IndexSets,
    pub options: BuildOptions,
    /// Non-fatal validation findings.
    pub diagnostics: Vec<Diagnostic>,
}

impl BuiltModel {
    pub fn names(&self) -> LpNames {
        LpNames { rows: self.constraints.names(), cols: self.variables.names() }
    }
}

pub fn build(scenario: &Scenario, options: &BuildOptions) -> Result<BuiltModel, BuildError> {
    let mut b = ModelBuilder::new(scenario, options)?;
    b.emit_all();
    Ok(b.finish())
}

/// Per-unit multipliers for the objective: Δt and, for materials, kg per kWh.
pub fn emit_objective(scenario: &Scenario, variables: &VariableCatalog) -> Vec<f64> {
    variables
        .entries()
        .iter()
        .map(|e| {
            let (kind, sign) = match e.kind {
                VarKind::Imp => (PortKind::Import, 1.0),
                VarKind::Exp => (PortKind::Export, -1.0),
                _ => return 0.0,
            };
            let hub = e.at.hub.as_deref().unwrap_or_default();
            let carrier = e.at.carrier.as_deref().unwrap_or_default();
            let price = scenario
                .port(hub, carrier, kind)
                .and_then(|p| p.price.as_ref())
                .map_or(0.0, |p| p[e.at.t]);
            let per_kwh = scenario.kg_per_kwh(carrier).unwrap_or(1.0);
            sign * price * per_kwh * scenario.time_grid.steps[e.at.t]
        })
        .collect()
}

pub struct ModelBuilder<'a> {
    scenario: &'a Scenario,
    options: BuildOptions,
    sets: IndexSets,
    lp: LinearProgram,
    vars: VariableCatalog,
    rows: ConstraintCatalog,
    efficiency: HashMap<String, f64>,
    diagnostics: Vec<Diagnostic>,
}

impl<'a> ModelBuilder<'a> {
    /// Validates the scenario and creates every column with its bounds and cost.
    pub fn new(scenario: &'a Scenario, options: &BuildOptions) -> Result<Self, BuildError> {
        let diagnostics = validate(scenario);
        if has_fatal(&diagnostics) {
            return Err(BuildError::Invalid(diagnostics));
        }
        let sets = derive_index_sets(scenario).expect("validated scenario resolves");
        let efficiency = scenario
            .processes
            .iter()
            .map(|p| (p.id.clone(), resolve_efficiency(scenario, p).expect("validated efficiency").0))
            .collect();
        let steps = scenario.time_grid.len();
        let mut b = ModelBuilder {
            scenario,
            options: *options,
            sets,
            lp: LinearProgram::new(),
            vars: VariableCatalog::new(steps),
            rows: ConstraintCatalog::new(steps),
            efficiency,
            diagnostics,
        };
        b.columns();
        for (j, c) in emit_objective(scenario, &b.vars).into_iter().enumerate() {
            b.lp.set_objective(j, c);
        }
        Ok(b)
    }

    fn add(&mut self, kind: VarKind, hub: &str, carrier: Option<&str>, element: Option<&str>, t: usize, lo: f64, up: f64) {
        let col = self.vars.push(kind, Qualifiers::new(Some(hub), carrier, element, t));
        let got = self.lp.add_column(0.0, lo, up);
        debug_assert_eq!(col, got);
    }

    fn port_series(&self, hub: &str, carrier: &str, kind: PortKind, t: usize) -> (f64, f64) {
        let k = self.scenario.kw_per_unit(carrier);
        match self.scenario.port(hub, carrier, kind) {
            Some(p) => (
                p.min.as_ref().map_or(0.0, |m| m[t] * k),
                p.max.as_ref().map_or(f64::INFINITY, |m| m[t] * k),
            ),
            None => (0.0, f64::INFINITY),
        }
    }

    fn limit(&self, process: &str, carrier: &str, side: Side, t: usize) -> f64 {
        let k = self.scenario.kw_per_unit(carrier);
        let p = self.scenario.process(process).expect("known process");
        p.limits
            .iter()
            .filter(|l| l.carrier == carrier && l.side == side)
            .map(|l| l.max[t] * k)
            .fold(f64::INFINITY, f64::min)
    }

    fn columns(&mut self) {
        let s = self.scenario;
        for t in 0..s.time_grid.len() {
            let hubs: Vec<String> = self.sets.hubs.keys().cloned().collect();
            for hub in &hubs {
                let hs = self.sets.hubs[hub].clone();
                let balance = hs.balance_carriers();
                for c in &hs.inlet_carriers {
                    if hs.import_carriers.contains(c) {
                        let (lo, up) = self.port_series(hub, c, PortKind::Import, t);
                        self.add(VarKind::Imp, hub, Some(c), None, t, lo, up);
                    }
                    if hs.return_carriers.contains(c) && balance.contains(c) {
                        let (_, up) = self.port_series(hub, c, PortKind::Return, t);
                        self.add(VarKind::Ret, hub, Some(c), None, t, 0.0, up);
                    }
                    self.add(VarKind::InTotal, hub, Some(c), None, t, 0.0, f64::INFINITY);
                }
                for p in &hs.processes {
                    for c in &hs.process_inlets[p] {
                        let up = self.limit(p, c, Side::Inlet, t);
                        self.add(VarKind::InProc, hub, Some(c), Some(p), t, 0.0, up);
                    }
                    self.add(VarKind::ProcInSum, hub, None, Some(p), t, 0.0, f64::INFINITY);
                    self.add(VarKind::ProcOutSum, hub, None, Some(p), t, 0.0, f64::INFINITY);
                    for c in &hs.process_outlets[p] {
                        let up = self.limit(p, c, Side::Outlet, t);
                        self.add(VarKind::OutProc, hub, Some(c), Some(p), t, 0.0, up);
                    }
                }
                for c in &balance {
                    if hs.outlet_carriers.contains(c) {
                        self.add(VarKind::OutTotal, hub, Some(c), None, t, 0.0, f64::INFINITY);
                    }
                    if hs.export_carriers.contains(c) {
                        let (_, up) = self.port_series(hub, c, PortKind::Export, t);
                        self.add(VarKind::Exp, hub, Some(c), None, t, 0.0, up);
                    }
                    if hs.network_carriers.contains(c) {
                        let (_, up) = self.port_series(hub, c, PortKind::Network, t);
                        self.add(VarKind::NetIn, hub, Some(c), None, t, 0.0, up);
                        self.add(VarKind::NetOut, hub, Some(c), None, t, 0.0, up);
                    }
                }
                for id in &hs.storages {
                    let st = s.storage(id).expect("known storage");
                    let c = st.carrier.as_str();
                    self.add(VarKind::StoCha, hub, Some(c), Some(id), t, 0.0, st.max_charge_rate);
                    self.add(VarKind::StoDis, hub, Some(c), Some(id), t, 0.0, st.max_discharge_rate);
                    self.add(VarKind::Soc, hub, None, Some(id), t, 0.0, st.capacity);
                }
            }
        }
    }

    fn col(&self, kind: VarKind, hub: &str, carrier: Option<&str>, element: Option<&str>, t: usize) -> Option<usize> {
        self.vars.lookup(kind, Some(hub), carrier, element, t)
    }

    fn row(&mut self, tag: RowTag, at: Qualifiers, rhs: f64, entries: &[(usize, f64)]) -> usize {
        let r = self.rows.push(tag, at);
        let got = self.lp.add_row(Relation::Eq, rhs, entries);
        debug_assert_eq!(r, got);
        r
    }

    /// Inlet-side balances of carrier `c` in `hub`: total intake from the
    /// import and return ports, and its split over consuming processes.
    pub fn emit_balance_eq3_4(&mut self, hub: &str, c: &str, t: usize) -> [usize; 2] {
        let total = self.col(VarKind::InTotal, hub, Some(c), None, t).expect("inlet carrier");
        let mut e3 = vec![(total, 1.0)];
        for kind in [VarKind::Imp, VarKind::Ret] {
            if let Some(j) = self.col(kind, hub, Some(c), None, t) {
                e3.push((j, -1.0));
            }
        }
        let r3 = self.row(RowTag::Eq3, Qualifiers::new(Some(hub), Some(c), None, t), 0.0, &e3);
        let mut e4 = vec![(total, 1.0)];
        for p in &self.sets.hubs[hub].consumers[c] {
            e4.push((self.col(VarKind::InProc, hub, Some(c), Some(p), t).unwrap(), -1.0));
        }
        let r4 = self.row(RowTag::Eq4, Qualifiers::new(Some(hub), Some(c), None, t), 0.0, &e4);
        [r3, r4]
    }

    /// Total production of carrier `c` in `hub` as the sum over producers.
    pub fn emit_balance_eq5(&mut self, hub: &str, c: &str, t: usize) -> usize {
        let total = self.col(VarKind::OutTotal, hub, Some(c), None, t).expect("outlet carrier");
        let mut e = vec![(total, 1.0)];
        for p in &self.sets.hubs[hub].producers[c] {
            e.push((self.col(VarKind::OutProc, hub, Some(c), Some(p), t).unwrap(), -1.0));
        }
        self.row(RowTag::Eq5, Qualifiers::new(Some(hub), Some(c), None, t), 0.0, &e)
    }

    /// Output-side balance: production, network extraction and storage
    /// discharge cover load, network injection, charging, export and return.
    pub fn emit_balance_eq6(&mut self, hub: &str, c: &str, t: usize) -> usize {
        let mut e = Vec::new();
        let plus = [VarKind::OutTotal, VarKind::NetOut];
        let minus = [VarKind::NetIn, VarKind::Exp, VarKind::Ret];
        for kind in plus {
            if let Some(j) = self.col(kind, hub, Some(c), None, t) {
                e.push((j, 1.0));
            }
        }
        for kind in minus {
            if let Some(j) = self.col(kind, hub, Some(c), None, t) {
                e.push((j, -1.0));
            }
        }
        for st in self.scenario.storages.iter().filter(|s| s.hub == hub && s.carrier == c) {
            e.push((self.col(VarKind::StoDis, hub, Some(c), Some(&st.id), t).unwrap(), 1.0));
            e.push((self.col(VarKind::StoCha, hub, Some(c), Some(&st.id), t).unwrap(), -1.0));
        }
        let load = self
            .scenario
            .port(hub, c, PortKind::Load)
            .and_then(|p| p.load.as_ref())
            .map_or(0.0, |l| l[t] * self.scenario.kw_per_unit(c));
        self.row(RowTag::Eq6, Qualifiers::new(Some(hub), Some(c), None, t), load, &e)
    }

    /// Conversion rows of one process: inlet and outlet sums, global
    /// efficiency, and the fixed carrier fractions on both sides.
    pub fn emit_process_eqs(&mut self, process: &str, t: usize) -> Vec<usize> {
        let p = self.scenario.process(process).expect("known process");
        let hub = p.hub.as_str();
        let pid = Some(process);
        let in_sum = self.col(VarKind::ProcInSum, hub, None, pid, t).unwrap();
        let out_sum = self.col(VarKind::ProcOutSum, hub, None, pid, t).unwrap();
        let at = |c: Option<&str>| Qualifiers::new(Some(hub), c, pid, t);
        let mut rows = Vec::new();

        let mut e7 = vec![(in_sum, 1.0)];
        e7.extend(p.inlets.iter().map(|s| (self.col(VarKind::InProc, hub, Some(&s.carrier), pid, t).unwrap(), -1.0)));
        rows.push(self.row(RowTag::Eq7, at(None), 0.0, &e7));

        let mut e8 = vec![(out_sum, 1.0)];
        e8.extend(p.outlets.iter().map(|s| (self.col(VarKind::OutProc, hub, Some(&s.carrier), pid, t).unwrap(), -1.0)));
        rows.push(self.row(RowTag::Eq8, at(None), 0.0, &e8));

        let eta = self.efficiency[process];
        rows.push(self.row(RowTag::Eq9, at(None), 0.0, &[(out_sum, 1.0), (in_sum, -eta)]));

        for s in &p.inlets {
            let j = self.col(VarKind::InProc, hub, Some(&s.carrier), pid, t).unwrap();
            rows.push(self.row(RowTag::Eq10, at(Some(&s.carrier)), 0.0, &[(j, 1.0), (in_sum, -s.fraction)]));
        }
        for s in &p.outlets {
            let j = self.col(VarKind::OutProc, hub, Some(&s.carrier), pid, t).unwrap();
            rows.push(self.row(RowTag::Eq11, at(Some(&s.carrier)), 0.0, &[(j, 1.0), (out_sum, -s.fraction)]));
        }
        rows
    }

    /// State-of-charge update of one storage over step `t`.
    pub fn emit_storage_dynamics(&mut self, storage: &str, t: usize) -> usize {
        let st = self.scenario.storage(storage).expect("known storage");
        let (hub, c, id) = (st.hub.as_str(), Some(st.carrier.as_str()), Some(storage));
        let dt = self.scenario.time_grid.steps[t];
        let leg = st.leg_efficiency();
        let soc = self.col(VarKind::Soc, hub, None, id, t).unwrap();
        let cha = self.col(VarKind::StoCha, hub, c, id, t).unwrap();
        let dis = self.col(VarKind::StoDis, hub, c, id, t).unwrap();
        let mut e = vec![(soc, 1.0), (cha, -dt * leg), (dis, dt / leg)];
        let rhs = if t == 0 {
            st.initial_soc
        } else {
            e.push((self.col(VarKind::Soc, hub, None, id, t - 1).unwrap(), -1.0));
            0.0
        };
        self.row(RowTag::StoDyn, Qualifiers::new(Some(hub), None, id, t), rhs, &e)
    }

    /// Final state of charge equal to the initial one.
    pub fn emit_storage_cycle(&mut self, storage: &str) -> usize {
        let st = self.scenario.storage(storage).expect("known storage");
        let last = self.scenario.time_grid.len() - 1;
        let soc = self.col(VarKind::Soc, &st.hub, None, Some(storage), last).unwrap();
        self.row(RowTag::StoCyc, Qualifiers::new(Some(&st.hub), None, Some(storage), last), st.initial_soc, &[(soc, 1.0)])
    }

    /// Loss-adjusted balance of injections and extractions over a network.
    pub fn emit_network_eq12(&mut self, carrier: &str, t: usize) -> usize {
        let n = self.scenario.network(carrier).expect("known network");
        let factor = 1.0 + n.loss_fraction;
        let (w_in, w_out) = match self.options.loss_orientation {
            LossOrientation::Physical => (1.0, -factor),
            LossOrientation::Paper => (-factor, 1.0),
        };
        let mut e = Vec::new();
        for hub in &self.sets.network_members[carrier] {
            e.push((self.col(VarKind::NetIn, hub, Some(carrier), None, t).unwrap(), w_in));
            e.push((self.col(VarKind::NetOut, hub, Some(carrier), None, t).unwrap(), w_out));
        }
        self.row(RowTag::Eq12, Qualifiers::new(None, Some(carrier), None, t), 0.0, &e)
    }

    pub fn emit_all(&mut self) {
        let steps = self.scenario.time_grid.len();
        let hubs: Vec<String> = self.sets.hubs.keys().cloned().collect();
        for t in 0..steps {
            for hub in &hubs {
                let hs = self.sets.hubs[hub].clone();
                for c in &hs.inlet_carriers {
                    self.emit_balance_eq3_4(hub, c, t);
                }
                for c in &hs.balance_carriers() {
                    if hs.outlet_carriers.contains(c) {
                        self.emit_balance_eq5(hub, c, t);
                    }
                    self.emit_balance_eq6(hub, c, t);
                }
                for p in &hs.processes {
                    self.emit_process_eqs(p, t);
                }
                for st in &hs.storages {
                    self.emit_storage_dynamics(st, t);
                }
            }
            let nets: Vec<String> = self.sets.network_carriers.iter().cloned().collect();
            for c in &nets {
                self.emit_network_eq12(c, t);
            }
        }
        let cyclic: Vec<String> = self
            .sets
            .hubs
            .values()
            .flat_map(|hs| hs.storages.iter().cloned())
            .filter(|id| self.scenario.storage(id).unwrap().terminal_policy == TerminalPolicy::Cyclic)
            .collect();
        if steps > 0 {
            for id in &cyclic {
                self.emit_storage_cycle(id);
            }
        }
    }

    pub fn lp(&self) -> &LinearProgram {
        &self.lp
    }

    pub fn variables(&self) -> &VariableCatalog {
        &self.vars
    }

    pub fn constraints(&self) -> &ConstraintCatalog {
        &self.rows
    }

    pub fn finish(self) -> BuiltModel {
        BuiltModel {
            lp: self.lp,
            variables: self.vars,
            constraints: self.rows,
            index_sets: self.sets,
            options: self.options,
            diagnostics: self.diagnostics,
        }
    }
}

#[cfg(test)]
mod tests;
