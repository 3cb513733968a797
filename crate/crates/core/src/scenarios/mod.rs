//! Ready-made scenarios: small toys with known optima and the three-hub
//! case study.

mod case_study;

pub use case_study::{
    case_study, case_study_files, case_study_series, write_case_study, CaseStudySeries, CASE_STUDY_STEPS, NETWORK_LOSS, PVT_AREA,
    WASTE_FLOW, WATER_EXERGY, WIND_LAW,
};

use crate::model::{Carrier, Efficiency, Hub, Network, Port, PortKind, Process, Scenario, Share, TimeGrid};

/// One hub, a gas boiler of efficiency 0.9 covering a heat load of 9 kW at
/// a gas price of 10 €/kWh. Each hourly step costs 100 €.
pub fn toy_boiler(steps: usize) -> Scenario {
    let mut s = Scenario::new("toy-boiler", TimeGrid::uniform(steps, 1.0));
    s.carriers = vec![Carrier::energy("gas"), Carrier::energy("heat")];
    s.hubs = vec![Hub { id: "hub1".into() }];
    s.processes.push(Process {
        id: "boiler".into(),
        hub: "hub1".into(),
        efficiency: Efficiency::Plain(0.9),
        inlets: vec![Share::new("gas", 1.0)],
        outlets: vec![Share::new("heat", 1.0)],
        limits: vec![],
    });
    s.ports.push(Port::new("hub1", "gas", PortKind::Import).with_price(vec![10.0; steps]));
    s.ports.push(Port::new("hub1", "heat", PortKind::Load).with_load(vec![9.0; steps]));
    s
}

/// Two hubs joined by an electricity network with loss fraction `loss`.
/// Hub `a` converts imported gas 1:1 to electricity; hub `b` has a load of
/// 100 kW and nothing else.
pub fn network_pair(steps: usize, loss: f64) -> Scenario {
    let mut s = Scenario::new("network-pair", TimeGrid::uniform(steps, 1.0));
    s.carriers = vec![Carrier::energy("gas"), Carrier::energy("elec")];
    s.hubs = vec![Hub { id: "a".into() }, Hub { id: "b".into() }];
    s.processes.push(Process {
        id: "generator".into(),
        hub: "a".into(),
        efficiency: Efficiency::Plain(1.0),
        inlets: vec![Share::new("gas", 1.0)],
        outlets: vec![Share::new("elec", 1.0)],
        limits: vec![],
    });
    s.ports.push(Port::new("a", "gas", PortKind::Import).with_price(vec![1.0; steps]));
    s.ports.push(Port::new("a", "elec", PortKind::Network).with_max(vec![1000.0; steps]));
    s.ports.push(Port::new("b", "elec", PortKind::Network).with_max(vec![1000.0; steps]));
    s.ports.push(Port::new("b", "elec", PortKind::Load).with_load(vec![100.0; steps]));
    s.networks.push(Network { carrier: "elec".into(), hubs: vec!["a".into(), "b".into()], loss_fraction: loss });
    s
}
