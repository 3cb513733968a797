use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::lp::{solve, SolveStatus, SolverOptions};
use crate::model::{Carrier, Efficiency, Hub, Port, Process, Share, StorageUnit, TimeGrid};
use crate::scenarios::{network_pair, toy_boiler};

fn kinds(m: &BuiltModel) -> BTreeSet<&'static str> {
    m.variables.entries().iter().map(|e| e.kind.as_str()).collect()
}

fn tags(m: &BuiltModel) -> BTreeSet<&'static str> {
    m.constraints.entries().iter().map(|e| e.tag.as_str()).collect()
}

fn row_entries(m: &BuiltModel, row: usize) -> Vec<(String, f64)> {
    let rows = m.lp.row_entries();
    rows[row].iter().map(|&(j, a)| (m.variables.name(j), a)).collect()
}

fn solved(s: &Scenario, options: &BuildOptions) -> (BuiltModel, Vec<f64>, f64) {
    let m = build(s, options).unwrap();
    let sol = solve(&m.lp, &SolverOptions::default());
    assert_eq!(sol.status, SolveStatus::Optimal, "{:?}", sol.message);
    (m, sol.values, sol.objective)
}

fn value(m: &BuiltModel, x: &[f64], name: &str) -> f64 {
    let j = m.variables.names().iter().position(|n| n == name).unwrap_or_else(|| panic!("no column {name}"));
    x[j]
}

fn process(id: &str, hub: &str, eta: f64, inlets: &[(&str, f64)], outlets: &[(&str, f64)]) -> Process {
    Process {
        id: id.into(),
        hub: hub.into(),
        efficiency: Efficiency::Plain(eta),
        inlets: inlets.iter().map(|&(c, f)| Share::new(c, f)).collect(),
        outlets: outlets.iter().map(|&(c, f)| Share::new(c, f)).collect(),
        limits: vec![],
    }
}

/// One process fed by fixed inlet imports, every outlet exported for free.
fn single_process(p: Process, feeds: &[(&str, f64)]) -> Scenario {
    let mut s = Scenario::new("single", TimeGrid::uniform(1, 1.0));
    let carriers: BTreeSet<String> =
        p.inlets.iter().chain(&p.outlets).map(|x| x.carrier.clone()).collect();
    s.carriers = carriers.iter().map(|c| Carrier::energy(c)).collect();
    s.hubs = vec![Hub { id: p.hub.clone() }];
    for &(c, v) in feeds {
        s.ports.push(Port::new(&p.hub, c, PortKind::Import).with_price(vec![0.0]).with_min(vec![v]).with_max(vec![v]));
    }
    for o in &p.outlets {
        s.ports.push(Port::new(&p.hub, &o.carrier, PortKind::Export).with_price(vec![0.0]));
    }
    s.processes.push(p);
    s
}

#[test]
fn single_hub_has_the_expected_column_and_row_families() {
    let m = build(&toy_boiler(1), &BuildOptions::default()).unwrap();
    let expected_cols: BTreeSet<_> = ["IMP", "IN_TOTAL", "IN_PROC", "PROC_IN_SUM", "PROC_OUT_SUM", "OUT_PROC", "OUT_TOTAL"].into();
    assert_eq!(kinds(&m), expected_cols);
    let expected_rows: BTreeSet<_> = ["EQ3", "EQ4", "EQ5", "EQ6", "EQ7", "EQ8", "EQ9", "EQ10", "EQ11"].into();
    assert_eq!(tags(&m), expected_rows);
    assert_eq!(m.lp.num_cols(), 7);
    assert_eq!(m.lp.num_rows(), 9);
}

#[test]
fn toy_boiler_costs_one_hundred_per_hour() {
    let (m, x, obj) = solved(&toy_boiler(1), &BuildOptions::default());
    assert!((obj - 100.0).abs() < 1e-9);
    assert!((value(&m, &x, "IMP.gas.hub1.t001") - 10.0).abs() < 1e-9);
    let (_, _, obj) = solved(&toy_boiler(3), &BuildOptions::default());
    assert!((obj - 300.0).abs() < 1e-9);
}

#[test]
fn carrier_split_over_two_consumers() {
    let mut s = toy_boiler(1);
    s.processes.push(process("boiler2", "hub1", 0.8, &[("gas", 1.0)], &[("heat", 1.0)]));
    let m = build(&s, &BuildOptions::default()).unwrap();
    let r = m.constraints.lookup(RowTag::Eq4, Some("hub1"), Some("gas"), None, 0).unwrap();
    assert_eq!(row_entries(&m, r).len(), 3);
}

#[test]
fn three_hub_network_row_has_six_terms() {
    let mut s = network_pair(1, 0.02);
    s.hubs.push(Hub { id: "c".into() });
    s.ports.push(Port::new("c", "elec", PortKind::Network).with_max(vec![1000.0]));
    s.ports.push(Port::new("c", "elec", PortKind::Load).with_load(vec![10.0]));
    s.networks[0].hubs.push("c".into());
    let m = build(&s, &BuildOptions::default()).unwrap();
    let r = m.constraints.lookup(RowTag::Eq12, None, Some("elec"), None, 0).unwrap();
    let e = row_entries(&m, r);
    assert_eq!(e.len(), 6);
    for (name, a) in e {
        let expect = if name.starts_with("NET_IN") { 1.0 } else { -1.02 };
        assert_eq!(a, expect, "{name}");
    }
}

#[test]
fn half_hour_step_halves_the_price_coefficient() {
    let mut s = toy_boiler(1);
    s.time_grid = TimeGrid { steps: vec![0.5] };
    let m = build(&s, &BuildOptions::default()).unwrap();
    let j = m.variables.lookup(VarKind::Imp, Some("hub1"), Some("gas"), None, 0).unwrap();
    assert_eq!(m.lp.objective()[j], 5.0);
    let nonzero = m.lp.objective().iter().filter(|c| **c != 0.0).count();
    assert_eq!(nonzero, 1);
}

#[test]
fn export_enters_the_objective_as_revenue() {
    let mut s = toy_boiler(1);
    s.ports.push(Port::new("hub1", "heat", PortKind::Export).with_price(vec![3.0]));
    let m = build(&s, &BuildOptions::default()).unwrap();
    let j = m.variables.lookup(VarKind::Exp, Some("hub1"), Some("heat"), None, 0).unwrap();
    assert_eq!(m.lp.objective()[j], -3.0);
}

#[test]
fn fuel_cell_splits_its_output() {
    let fc = process("fc", "h", 0.75, &[("h2", 1.0)], &[("elec", 2.0 / 3.0), ("heat", 1.0 / 3.0)]);
    let (m, x, _) = solved(&single_process(fc, &[("h2", 100.0)]), &BuildOptions::default());
    assert!((value(&m, &x, "OUT_PROC.elec.h.fc.t001") - 50.0).abs() <= 1e-12 * 50.0);
    assert!((value(&m, &x, "OUT_PROC.heat.h.fc.t001") - 25.0).abs() <= 1e-12 * 25.0);
}

#[test]
fn compressor_takes_two_inlets() {
    let cp = process("comp", "h", 0.9, &[("elec", 0.1), ("h2lp", 0.9)], &[("h2hp", 1.0)]);
    let (m, x, _) = solved(&single_process(cp, &[("elec", 10.0), ("h2lp", 90.0)]), &BuildOptions::default());
    assert!((value(&m, &x, "PROC_IN_SUM.h.comp.t001") - 100.0).abs() <= 1e-12 * 100.0);
    assert!((value(&m, &x, "OUT_PROC.h2hp.h.comp.t001") - 90.0).abs() <= 1e-12 * 90.0);
}

#[test]
fn return_port_appears_in_both_balances() {
    let mut s = Scenario::new("ret", TimeGrid::uniform(1, 1.0));
    s.carriers = vec![Carrier::energy("gas"), Carrier::energy("elec"), Carrier::energy("heat")];
    s.hubs = vec![Hub { id: "h".into() }];
    s.processes.push(process("gen", "h", 0.5, &[("gas", 1.0)], &[("elec", 1.0)]));
    s.processes.push(process("hp", "h", 1.0, &[("elec", 1.0)], &[("heat", 1.0)]));
    s.ports.push(Port::new("h", "gas", PortKind::Import).with_price(vec![1.0]));
    s.ports.push(Port::new("h", "elec", PortKind::Return));
    s.ports.push(Port::new("h", "heat", PortKind::Load).with_load(vec![5.0]));
    let m = build(&s, &BuildOptions::default()).unwrap();
    let ret = "RET.elec.h.t001".to_string();
    let r3 = m.constraints.lookup(RowTag::Eq3, Some("h"), Some("elec"), None, 0).unwrap();
    let r6 = m.constraints.lookup(RowTag::Eq6, Some("h"), Some("elec"), None, 0).unwrap();
    assert!(row_entries(&m, r3).contains(&(ret.clone(), -1.0)));
    assert!(row_entries(&m, r6).contains(&(ret, -1.0)));
    let (_, _, obj) = solved(&s, &BuildOptions::default());
    assert!((obj - 10.0).abs() < 1e-9);
}

fn network_totals(m: &BuiltModel, x: &[f64]) -> (f64, f64) {
    let mut injected = 0.0;
    let mut extracted = 0.0;
    for (j, e) in m.variables.entries().iter().enumerate() {
        match e.kind {
            VarKind::NetIn => injected += x[j],
            VarKind::NetOut => extracted += x[j],
            _ => {}
        }
    }
    (injected, extracted)
}

#[test]
fn loss_orientation_sets_the_ratio() {
    let s = network_pair(1, 0.05);
    let (m, x, obj) = solved(&s, &BuildOptions { loss_orientation: LossOrientation::Physical });
    let (injected, extracted) = network_totals(&m, &x);
    assert!((extracted - injected / 1.05).abs() < 1e-9);
    assert!((obj - 105.0).abs() < 1e-9);

    // the reverse ratio gains energy in transit, so circulation pays off
    let (m, x, _) = solved(&s, &BuildOptions { loss_orientation: LossOrientation::Paper });
    let (injected, extracted) = network_totals(&m, &x);
    assert!((extracted - 1.05 * injected).abs() < 1e-9);
    assert_eq!("paper".parse::<LossOrientation>().unwrap(), LossOrientation::Paper);
    assert!("sideways".parse::<LossOrientation>().is_err());
}

fn caes(policy: TerminalPolicy) -> StorageUnit {
    StorageUnit {
        id: "caes".into(),
        hub: "a".into(),
        carrier: "elec".into(),
        round_trip_efficiency: 0.65,
        capacity: 100.0,
        max_charge_rate: 10.0,
        max_discharge_rate: 10.0,
        initial_soc: 0.0,
        terminal_policy: policy,
    }
}

#[test]
fn storage_round_trip_loses_the_declared_share() {
    let mut s = network_pair(2, 0.0);
    s.storages.push(caes(TerminalPolicy::Free));
    let mut m = build(&s, &BuildOptions::default()).unwrap();
    // charge 10 kWh in the first hour and end empty
    let cha = m.variables.lookup(VarKind::StoCha, Some("a"), Some("elec"), Some("caes"), 0).unwrap();
    let dis: Vec<usize> = (0..2).map(|t| m.variables.lookup(VarKind::StoDis, Some("a"), Some("elec"), Some("caes"), t).unwrap()).collect();
    let soc = m.variables.lookup(VarKind::Soc, Some("a"), None, Some("caes"), 1).unwrap();
    m.lp.set_bounds(cha, 10.0, 10.0);
    m.lp.set_bounds(soc, 0.0, 0.0);
    let sol = solve(&m.lp, &SolverOptions::default());
    assert_eq!(sol.status, SolveStatus::Optimal);
    assert!((sol.values[dis[0]] + sol.values[dis[1]] - 6.5).abs() < 1e-9);
    assert_eq!(m.constraints.count(RowTag::StoDyn), 2);
    assert_eq!(m.constraints.count(RowTag::StoCyc), 0);

    s.storages[0] = caes(TerminalPolicy::Cyclic);
    let m = build(&s, &BuildOptions::default()).unwrap();
    assert_eq!(m.constraints.count(RowTag::StoCyc), 1);
    assert_eq!(m.constraints.entry(m.lp.num_rows() - 1).tag, RowTag::StoCyc);
}

#[test]
fn material_flows_are_converted_to_exergy() {
    let mut s = Scenario::new("water", TimeGrid::uniform(1, 1.0));
    s.carriers = vec![Carrier::energy("heat"), Carrier::material("water", 50_000.0)];
    s.hubs = vec![Hub { id: "h".into() }];
    s.processes.push(process("desal", "h", 1.0, &[("heat", 1.0)], &[("water", 1.0)]));
    s.ports.push(Port::new("h", "heat", PortKind::Import).with_price(vec![0.0]));
    s.ports.push(Port::new("h", "water", PortKind::Load).with_load(vec![2.0]));
    s.ports.push(Port::new("h", "water", PortKind::Export).with_price(vec![0.5]).with_max(vec![4.0]));
    let m = build(&s, &BuildOptions::default()).unwrap();
    let r6 = m.constraints.lookup(RowTag::Eq6, Some("h"), Some("water"), None, 0).unwrap();
    assert_eq!(m.lp.rhs()[r6], 100.0);
    let j = m.variables.lookup(VarKind::Exp, Some("h"), Some("water"), None, 0).unwrap();
    assert_eq!(m.lp.upper()[j], 200.0);
    // 0.5 €/kg at 72 kg per exergy-kWh
    assert!((m.lp.objective()[j] + 36.0).abs() < 1e-12);
}

#[test]
fn fatal_scenario_is_rejected() {
    let mut s = toy_boiler(1);
    s.processes[0].inlets[0].fraction = 0.5;
    match build(&s, &BuildOptions::default()) {
        Err(BuildError::Invalid(d)) => assert!(d.iter().any(|x| x.code.as_str() == "FRACTION_SUM")),
        Ok(_) => panic!("built an invalid scenario"),
    }
}

#[test]
fn names_are_unique_and_layout_is_time_major() {
    let m = build(&network_pair(3, 0.02), &BuildOptions::default()).unwrap();
    let names = m.variables.names();
    assert_eq!(names.iter().collect::<BTreeSet<_>>().len(), names.len());
    let steps: Vec<usize> = m.variables.entries().iter().map(|e| e.at.t).collect();
    assert!(steps.windows(2).all(|w| w[0] <= w[1]));
    let steps: Vec<usize> = m.constraints.entries().iter().map(|e| e.at.t).collect();
    assert!(steps.windows(2).all(|w| w[0] <= w[1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn objective_scales_linearly_with_prices(lambda in 0.01f64..100.0, loss in 0.0f64..0.2) {
        let s = network_pair(2, loss);
        let base = build(&s, &BuildOptions::default()).unwrap();
        let scaled = build(&s.with_scaled_prices(lambda), &BuildOptions::default()).unwrap();
        for (a, b) in base.lp.objective().iter().zip(scaled.lp.objective()) {
            prop_assert!((a * lambda - b).abs() <= 1e-12 * (a * lambda).abs());
        }
        let x = solve(&base.lp, &SolverOptions::default());
        let y = solve(&scaled.lp, &SolverOptions::default());
        prop_assert!((x.objective * lambda - y.objective).abs() <= 1e-9 * (x.objective * lambda).abs());
    }

    #[test]
    fn fraction_rows_are_implied_by_the_sums(f in 0.05f64..0.95, eta in 0.1f64..1.0, feed in 1.0f64..100.0) {
        // the last fraction row of each side follows from the others and the sum row
        let p = process("mix", "h", eta, &[("a", f), ("b", 1.0 - f)], &[("c", 1.0)]);
        let s = single_process(p, &[("a", feed * f), ("b", feed * (1.0 - f))]);
        let mut m = build(&s, &BuildOptions::default()).unwrap();
        let r = m.constraints.lookup(RowTag::Eq10, Some("h"), Some("b"), Some("mix"), 0).unwrap();
        let full = solve(&m.lp, &SolverOptions::default());
        m.lp.set_rhs(r, 0.0);
        let rows = m.lp.row_entries();
        let activity: f64 = rows[r].iter().map(|&(j, a)| a * full.values[j]).sum();
        prop_assert!(activity.abs() <= 1e-9 * (1.0 + feed));
        let c = m.variables.lookup(VarKind::OutProc, Some("h"), Some("c"), Some("mix"), 0).unwrap();
        prop_assert!((full.values[c] - eta * feed).abs() <= 1e-9 * feed);
    }
}

#[test]
fn bare_hub_has_no_process_storage_or_network_rows() {
    let mut s = Scenario::new("bare", TimeGrid::uniform(4, 1.0));
    s.carriers = vec![Carrier::energy("gas")];
    s.hubs = vec![Hub { id: "h".into() }];
    s.ports.push(Port::new("h", "gas", PortKind::Import).with_price(vec![1.0; 4]));
    let m = build(&s, &BuildOptions::default()).unwrap();
    for tag in [RowTag::Eq7, RowTag::Eq8, RowTag::Eq9, RowTag::Eq10, RowTag::Eq11, RowTag::Eq12, RowTag::StoDyn, RowTag::StoCyc] {
        assert_eq!(m.constraints.count(tag), 0, "{}", tag.as_str());
    }
    assert_eq!(m.lp.num_rows(), m.constraints.len());
}
