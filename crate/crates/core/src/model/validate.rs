use std::collections::{BTreeMap, BTreeSet};

use super::{
    derive_index_sets, resolve_efficiency, CarrierKind, Diagnostic, DiagnosticCode as Code, Efficiency, PortKind, Scenario,
    Side,
};

const FRACTION_TOL: f64 = 1e-9;

pub fn has_fatal(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_fatal)
}

struct Checker<'a> {
    scenario: &'a Scenario,
    out: Vec<Diagnostic>,
    broken_refs: bool,
}

impl Checker<'_> {
    fn fatal(&mut self, code: Code, element: &str, message: String) {
        self.out.push(Diagnostic::fatal(code, element, message));
    }

    fn warning(&mut self, code: Code, element: &str, message: String) {
        self.out.push(Diagnostic::warning(code, element, message));
    }

    fn series(&mut self, values: &[f64], field: &str, element: &str, non_negative: bool) {
        let t = self.scenario.time_grid.len();
        if values.len() != t {
            self.fatal(Code::SeriesLength, element, format!("{field} has {} values, the time grid has {t}", values.len()));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            self.fatal(Code::NonFinite, element, format!("{field} step {} is not finite", k + 1));
        } else if non_negative {
            if let Some(k) = values.iter().position(|&v| v < 0.0) {
                self.fatal(Code::NegativeSeries, element, format!("{field} step {} is negative ({})", k + 1, values[k]));
            }
        }
    }

    fn hub_ref(&mut self, hub: &str, element: &str) {
        if !self.scenario.hubs.iter().any(|h| h.id == hub) {
            self.broken_refs = true;
            self.fatal(Code::UnknownReference, element, format!("unknown hub '{hub}'"));
        }
    }

    fn carrier_ref(&mut self, carrier: &str, element: &str) -> bool {
        if self.scenario.carrier(carrier).is_none() {
            self.broken_refs = true;
            self.fatal(Code::UnknownReference, element, format!("unknown carrier '{carrier}'"));
            false
        } else {
            true
        }
    }

    fn duplicates<'b>(&mut self, kind: &str, ids: impl Iterator<Item = &'b String>) {
        let mut seen = BTreeSet::new();
        for id in ids {
            if !seen.insert(id.as_str()) {
                self.fatal(Code::DuplicateId, &format!("{kind} {id}"), format!("{kind} id '{id}' is declared more than once"));
            }
        }
    }
}

/// Structural validation; an empty result means the scenario can be built.
pub fn validate(scenario: &Scenario) -> Vec<Diagnostic> {
    let mut c = Checker { scenario, out: Vec::new(), broken_refs: false };
    let s = scenario;

    if s.time_grid.is_empty() {
        c.fatal(Code::GridStep, "time_grid", "time grid has no steps".into());
    }
    for (t, &dt) in s.time_grid.steps.iter().enumerate() {
        if !(dt.is_finite() && dt > 0.0) {
            c.fatal(Code::GridStep, "time_grid", format!("step {} has duration {dt}", t + 1));
        }
    }

    c.duplicates("carrier", s.carriers.iter().map(|x| &x.id));
    for car in &s.carriers {
        let el = format!("carrier {}", car.id);
        match (car.kind, car.chemical_exergy) {
            (CarrierKind::Energy, Some(_)) => {
                c.fatal(Code::CarrierExergy, &el, "energy carriers take no chemical exergy".into())
            }
            (CarrierKind::Material, None) => {
                c.fatal(Code::CarrierExergy, &el, "material carriers need a chemical exergy".into())
            }
            (CarrierKind::Material, Some(e)) if !(e.is_finite() && e > 0.0) => {
                c.fatal(Code::CarrierExergy, &el, format!("chemical exergy {e} must be positive"))
            }
            _ => {}
        }
    }
    c.duplicates("hub", s.hubs.iter().map(|x| &x.id));

    c.duplicates("process", s.processes.iter().map(|x| &x.id));
    for p in &s.processes {
        let el = format!("process {}", p.id);
        c.hub_ref(&p.hub, &el);
        for (side, shares) in [("inlet", &p.inlets), ("outlet", &p.outlets)] {
            if shares.is_empty() {
                c.fatal(Code::EmptySide, &el, format!("process has no {side}"));
                continue;
            }
            let mut seen = BTreeSet::new();
            for sh in shares.iter() {
                c.carrier_ref(&sh.carrier, &el);
                if !seen.insert(sh.carrier.as_str()) {
                    c.fatal(Code::DuplicateShare, &el, format!("{side} carrier '{}' listed twice", sh.carrier));
                }
                if !(sh.fraction.is_finite() && sh.fraction > 0.0 && sh.fraction <= 1.0) {
                    c.fatal(Code::FractionRange, &el, format!("{side} fraction {} of '{}' is outside (0, 1]", sh.fraction, sh.carrier));
                }
            }
            let sum: f64 = shares.iter().map(|x| x.fraction).sum();
            if (sum - 1.0).abs() > FRACTION_TOL {
                c.fatal(Code::FractionSum, &el, format!("{side} fractions sum to {sum}, expected 1"));
            }
        }
        match p.efficiency {
            Efficiency::Plain(_) => {
                if let Err(msg) = resolve_efficiency(s, p) {
                    c.fatal(Code::EfficiencyRange, &el, msg);
                }
            }
            Efficiency::Declared { value, unit } => {
                if !(value.is_finite() && value > 0.0) {
                    c.fatal(Code::EfficiencyRange, &el, format!("coefficient {value} {} must be positive", unit.as_str()));
                } else {
                    match resolve_efficiency(s, p) {
                        Ok((eta, Some(factor))) => c.out.push(Diagnostic::info(
                            Code::UnitCoefficient,
                            &el,
                            format!("{value} {} converted with factor {factor} to exergy efficiency {eta}", unit.as_str()),
                        )),
                        Ok(_) => {}
                        Err(msg) => c.fatal(Code::UnitCoefficientInvalid, &el, msg),
                    }
                }
            }
        }
        for lim in &p.limits {
            let shares = match lim.side {
                Side::Inlet => &p.inlets,
                Side::Outlet => &p.outlets,
            };
            let side = if lim.side == Side::Inlet { "inlet" } else { "outlet" };
            if !shares.iter().any(|x| x.carrier == lim.carrier) {
                c.fatal(Code::LimitCarrier, &el, format!("limit names '{}', which is not an {side} of the process", lim.carrier));
            }
            c.series(&lim.max, &format!("{side} limit on '{}'", lim.carrier), &el, true);
        }
    }

    c.duplicates("storage", s.storages.iter().map(|x| &x.id));
    for st in &s.storages {
        let el = format!("storage {}", st.id);
        c.hub_ref(&st.hub, &el);
        c.carrier_ref(&st.carrier, &el);
        let eta = st.round_trip_efficiency;
        if !(eta.is_finite() && eta > 0.0 && eta <= 1.0) {
            c.fatal(Code::StorageParam, &el, format!("round-trip efficiency {eta} is outside (0, 1]"));
        }
        for (name, v) in [
            ("capacity", st.capacity),
            ("max_charge_rate", st.max_charge_rate),
            ("max_discharge_rate", st.max_discharge_rate),
            ("initial_soc", st.initial_soc),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                c.fatal(Code::StorageParam, &el, format!("{name} {v} must be finite and non-negative"));
            }
        }
        if st.initial_soc > st.capacity {
            c.fatal(Code::StorageParam, &el, format!("initial_soc {} exceeds capacity {}", st.initial_soc, st.capacity));
        }
    }

    let mut port_keys = BTreeSet::new();
    for port in &s.ports {
        let el = format!("port {}/{}/{}", port.hub, port.carrier, port.kind.as_str());
        c.hub_ref(&port.hub, &el);
        c.carrier_ref(&port.carrier, &el);
        if !port_keys.insert((port.hub.as_str(), port.carrier.as_str(), port.kind)) {
            c.fatal(Code::DuplicatePort, &el, "more than one port for this hub, carrier and kind".into());
        }
        let allowed: [bool; 4] = match port.kind {
            // price, max, min, load
            PortKind::Import => [true, true, true, false],
            PortKind::Export => [true, true, false, false],
            PortKind::Network => [false, true, false, false],
            PortKind::Return => [false, true, false, false],
            PortKind::Load => [false, false, false, true],
        };
        let fields = [("price", &port.price), ("max", &port.max), ("min", &port.min), ("load", &port.load)];
        for ((name, value), ok) in fields.iter().zip(allowed) {
            if let Some(v) = value {
                if ok {
                    c.series(v, name, &el, *name != "price");
                } else {
                    c.fatal(Code::PortFields, &el, format!("{} ports take no {name} series", port.kind.as_str()));
                }
            }
        }
        match port.kind {
            PortKind::Import | PortKind::Export if port.price.is_none() => {
                c.fatal(Code::PriceMissing, &el, format!("{} ports need a price series", port.kind.as_str()))
            }
            PortKind::Network if port.max.is_none() => {
                c.fatal(Code::NetworkMaxMissing, &el, "network ports need a max series".into())
            }
            PortKind::Load if port.load.is_none() => c.fatal(Code::PortFields, &el, "load ports need a load series".into()),
            _ => {}
        }
        if let (Some(lo), Some(hi)) = (&port.min, &port.max) {
            if let Some(k) = lo.iter().zip(hi.iter()).position(|(a, b)| a > b) {
                c.fatal(Code::MinExceedsMax, &el, format!("min {} exceeds max {} at step {}", lo[k], hi[k], k + 1));
            }
        }
    }

    let mut net_seen = BTreeSet::new();
    for n in &s.networks {
        let el = format!("network {}", n.carrier);
        c.carrier_ref(&n.carrier, &el);
        if !net_seen.insert(n.carrier.as_str()) {
            c.fatal(Code::DuplicateId, &el, "more than one network for this carrier".into());
        }
        let members: BTreeSet<&str> = n.hubs.iter().map(String::as_str).collect();
        if members.len() != n.hubs.len() {
            c.fatal(Code::NetworkMembers, &el, "a hub is listed twice".into());
        }
        if members.len() < 2 {
            c.fatal(Code::NetworkMembers, &el, format!("networks need at least two hubs, got {}", members.len()));
        }
        for h in &n.hubs {
            c.hub_ref(h, &el);
            if s.port(h, &n.carrier, PortKind::Network).is_none() {
                c.fatal(Code::NetworkPortMissing, &el, format!("member hub '{h}' has no network port for '{}'", n.carrier));
            }
        }
        if !(n.loss_fraction.is_finite() && n.loss_fraction >= 0.0) {
            c.fatal(Code::LossFraction, &el, format!("loss fraction {} must be finite and non-negative", n.loss_fraction));
        }
    }
    for port in s.ports.iter().filter(|p| p.kind == PortKind::Network) {
        let member = s.networks.iter().any(|n| n.carrier == port.carrier && n.hubs.contains(&port.hub));
        if !member {
            let el = format!("port {}/{}/network", port.hub, port.carrier);
            c.fatal(Code::NetworkPortOrphan, &el, format!("hub is not a member of a '{}' network", port.carrier));
        }
    }

    if !c.broken_refs {
        structural(&mut c);
    }
    c.out
}

/// Checks that need the derived index sets: every balance row must be
/// satisfiable in principle and every port must connect to one.
fn structural(c: &mut Checker<'_>) {
    let s = c.scenario;
    let sets = match derive_index_sets(s) {
        Ok(sets) => sets,
        Err(e) => {
            c.fatal(Code::UnknownReference, "scenario", e.to_string());
            return;
        }
    };
    let mut storage_by_hub: BTreeMap<&str, Vec<&super::StorageUnit>> = BTreeMap::new();
    for st in &s.storages {
        storage_by_hub.entry(st.hub.as_str()).or_default().push(st);
    }
    for (hub, hs) in &sets.hubs {
        let balance = hs.balance_carriers();
        for car in &hs.load_carriers {
            if !balance.contains(car) {
                let el = format!("port {hub}/{car}/load");
                c.fatal(Code::LoadUnsatisfiable, &el, format!("no process in '{hub}' produces '{car}' and the hub has no network port for it"));
            }
        }
        for car in &hs.inlet_carriers {
            if !hs.import_carriers.contains(car) && !hs.return_carriers.contains(car) {
                let el = format!("hub {hub}");
                c.fatal(Code::UnsourcedInlet, &el, format!("'{car}' is consumed but has neither an import nor a return port"));
            }
        }
        for car in &hs.return_carriers {
            let el = format!("port {hub}/{car}/return");
            if !hs.inlet_carriers.contains(car) {
                c.warning(Code::ReturnUnused, &el, format!("no process in '{hub}' consumes '{car}'; port ignored"));
            } else if !balance.contains(car) {
                c.fatal(Code::ReturnUnsourced, &el, format!("'{car}' is neither produced in '{hub}' nor delivered by a network"));
            }
        }
        for car in &hs.import_carriers {
            if !hs.inlet_carriers.contains(car) {
                let el = format!("port {hub}/{car}/import");
                let forced = s
                    .port(hub, car, PortKind::Import)
                    .and_then(|p| p.min.as_ref())
                    .is_some_and(|m| m.iter().any(|&v| v > 0.0));
                if forced {
                    c.fatal(Code::ForcedImportUnused, &el, format!("forced import of '{car}' has no consuming process"));
                } else {
                    c.warning(Code::ImportUnused, &el, format!("no process in '{hub}' consumes '{car}'; port ignored"));
                }
            }
        }
        for car in &hs.export_carriers {
            if !balance.contains(car) {
                let el = format!("port {hub}/{car}/export");
                c.warning(Code::ExportUnused, &el, format!("'{car}' has no balance in '{hub}'; port ignored"));
            }
        }
        for st in storage_by_hub.get(hub.as_str()).into_iter().flatten() {
            if !balance.contains(&st.carrier) {
                let el = format!("storage {}", st.id);
                c.fatal(Code::StorageUnconnected, &el, format!("'{}' has no balance in '{hub}'", st.carrier));
            }
        }
    }
}
