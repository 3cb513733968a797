//! Index sets over hubs, carriers and processes. All sets are ordered by
//! id, so derivation does not depend on declaration order.

use std::collections::{BTreeMap, BTreeSet};

use super::{ModelError, PortKind, Scenario};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HubSets {
    /// Carriers consumed by at least one process of the hub.
    pub inlet_carriers: BTreeSet<String>,
    /// Carriers produced by at least one process of the hub.
    pub outlet_carriers: BTreeSet<String>,
    /// Carriers with a network port.
    pub network_carriers: BTreeSet<String>,
    pub import_carriers: BTreeSet<String>,
    pub export_carriers: BTreeSet<String>,
    pub return_carriers: BTreeSet<String>,
    pub load_carriers: BTreeSet<String>,
    pub processes: BTreeSet<String>,
    pub storages: BTreeSet<String>,
    /// carrier -> processes consuming it
    pub consumers: BTreeMap<String, BTreeSet<String>>,
    /// carrier -> processes producing it
    pub producers: BTreeMap<String, BTreeSet<String>>,
    /// process -> inlet carriers
    pub process_inlets: BTreeMap<String, BTreeSet<String>>,
    /// process -> outlet carriers
    pub process_outlets: BTreeMap<String, BTreeSet<String>>,
}

impl HubSets {
    /// Carriers with an output-side balance: produced here or exchanged
    /// over a network.
    pub fn balance_carriers(&self) -> BTreeSet<String> {
        self.outlet_carriers.union(&self.network_carriers).cloned().collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IndexSets {
    pub hubs: BTreeMap<String, HubSets>,
    /// Carriers exchanged over a network.
    pub network_carriers: BTreeSet<String>,
    /// carrier -> member hubs of its network
    pub network_members: BTreeMap<String, BTreeSet<String>>,
}

impl IndexSets {
    pub fn hub(&self, id: &str) -> Option<&HubSets> {
        self.hubs.get(id)
    }
}

pub fn derive_index_sets(scenario: &Scenario) -> Result<IndexSets, ModelError> {
    let mut sets = IndexSets::default();
    for h in &scenario.hubs {
        sets.hubs.insert(h.id.clone(), HubSets::default());
    }
    let carrier_known = |id: &str| -> Result<(), ModelError> {
        match scenario.carrier(id) {
            Some(_) => Ok(()),
            None => Err(ModelError::Unknown { kind: "carrier", id: id.to_string() }),
        }
    };
    fn hub_mut<'a>(sets: &'a mut IndexSets, id: &str) -> Result<&'a mut HubSets, ModelError> {
        sets.hubs.get_mut(id).ok_or_else(|| ModelError::Unknown { kind: "hub", id: id.to_string() })
    }

    for p in &scenario.processes {
        let hs = hub_mut(&mut sets, &p.hub)?;
        hs.processes.insert(p.id.clone());
        let ins = hs.process_inlets.entry(p.id.clone()).or_default();
        for s in &p.inlets {
            ins.insert(s.carrier.clone());
        }
        let outs = hs.process_outlets.entry(p.id.clone()).or_default();
        for s in &p.outlets {
            outs.insert(s.carrier.clone());
        }
        for s in &p.inlets {
            carrier_known(&s.carrier)?;
            hs.inlet_carriers.insert(s.carrier.clone());
            hs.consumers.entry(s.carrier.clone()).or_default().insert(p.id.clone());
        }
        for s in &p.outlets {
            carrier_known(&s.carrier)?;
            hs.outlet_carriers.insert(s.carrier.clone());
            hs.producers.entry(s.carrier.clone()).or_default().insert(p.id.clone());
        }
    }
    for s in &scenario.storages {
        carrier_known(&s.carrier)?;
        hub_mut(&mut sets, &s.hub)?.storages.insert(s.id.clone());
    }
    for port in &scenario.ports {
        carrier_known(&port.carrier)?;
        let hs = hub_mut(&mut sets, &port.hub)?;
        let set = match port.kind {
            PortKind::Import => &mut hs.import_carriers,
            PortKind::Export => &mut hs.export_carriers,
            PortKind::Network => &mut hs.network_carriers,
            PortKind::Return => &mut hs.return_carriers,
            PortKind::Load => &mut hs.load_carriers,
        };
        set.insert(port.carrier.clone());
    }
    for n in &scenario.networks {
        carrier_known(&n.carrier)?;
        sets.network_carriers.insert(n.carrier.clone());
        let members = sets.network_members.entry(n.carrier.clone()).or_default();
        for h in &n.hubs {
            if !scenario.hubs.iter().any(|x| &x.id == h) {
                return Err(ModelError::Unknown { kind: "hub", id: h.clone() });
            }
            members.insert(h.clone());
        }
    }
    Ok(sets)
}
