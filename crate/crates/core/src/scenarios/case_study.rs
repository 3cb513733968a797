//! Three-hub case study: a renewable hub, a residential hub and an
//! industrial hub, one week at hourly resolution.
//!
//! Process, port and network data follow the published system tables.
//! Weather and load series are synthetic profiles of the right shape and
//! scale; storage sizes are assumed.

use std::f64::consts::PI;
use std::path::Path;

use crate::io::{format_series, to_document, Document, SeriesDoc, SolarDoc, WindDoc};
use crate::model::{
    renewable_limit_series, Carrier, CoefficientUnit, Efficiency, FlowLimit, Hub, Network, Port, PortKind, Process,
    RenewableLaw, Scenario, Share, Side, StorageUnit, TerminalPolicy, TimeGrid,
};

pub const CASE_STUDY_STEPS: usize = 168;
/// Chemical exergy of potable water, J/kg.
pub const WATER_EXERGY: f64 = 50_000.0;
pub const WIND_LAW: RenewableLaw = RenewableLaw::Wind { coefficient: 5.0, cut_in: 3.0, cut_off: 25.0 };
pub const PVT_AREA: f64 = 20.0;
pub const NETWORK_LOSS: f64 = 0.05;
/// Waste flow the industrial hub must take, kW.
pub const WASTE_FLOW: f64 = 2000.0;

/// Weather and load inputs, one value per hour.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseStudySeries {
    /// m/s
    pub wind_speed: Vec<f64>,
    /// W/m²
    pub irradiance: Vec<f64>,
    /// (hub, carrier, values) in kW, kg/s for water
    pub loads: Vec<(&'static str, &'static str, Vec<f64>)>,
}

fn tenth(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

fn bump(h: f64, centre: f64, width: f64) -> f64 {
    (-((h - centre) / width).powi(2)).exp()
}

fn weekend(day: usize) -> bool {
    day >= 5
}

fn outdoor_temperature(t: usize) -> f64 {
    let (h, day) = ((t % 24) as f64, t / 24);
    const DAILY_MEAN: [f64; 7] = [4.0, 3.0, 1.5, 2.5, 5.0, 6.0, 4.5];
    DAILY_MEAN[day % 7] + 3.0 * (2.0 * PI * (h - 9.0) / 24.0).sin()
}

pub fn case_study_series(steps: usize) -> CaseStudySeries {
    let hours = 0..steps;
    let wind_speed = hours
        .clone()
        .map(|t| {
            let x = t as f64;
            let v = if (60..100).contains(&t) {
                1.4 + 0.8 * (x / 5.0).sin()
            } else if t >= 160 {
                3.4 + 0.3 * (x / 2.0).sin()
            } else {
                5.4 + 1.3 * (2.0 * PI * x / 30.0).sin() + 0.6 * (2.0 * PI * x / 7.3).sin()
            };
            tenth(v.max(0.0))
        })
        .collect();
    const SUN_PEAK: [f64; 7] = [320.0, 410.0, 180.0, 260.0, 450.0, 380.0, 300.0];
    let irradiance = hours
        .clone()
        .map(|t| {
            let h = (t % 24) as f64;
            let g = SUN_PEAK[(t / 24) % 7] * (PI * (h - 7.5) / 9.5).sin();
            tenth(if (8.0..=16.0).contains(&h) { g.max(0.0) } else { 0.0 })
        })
        .collect();

    let residents = 5000.0;
    let office_staff = 2500.0;
    let per_capita_elec = |h: f64| 0.30 + 0.12 * bump(h, 8.0, 1.5) + 0.30 * bump(h, 19.5, 2.0);
    let water_shape = |h: f64| 0.2 + bump(h, 7.5, 1.5) + 0.7 * bump(h, 19.5, 2.0);
    let water_norm: f64 = (0..24).map(|h| water_shape(h as f64)).sum();
    let office_open = |h: f64, day: usize| !weekend(day) && (7.0..19.0).contains(&h);
    let office_water = |h: f64, day: usize| if office_open(h, day) { 1.0 } else { 0.1 };
    let office_norm: f64 = (0..24).map(|h| office_water(h as f64, 0)).sum();
    let litres_per_day = 352.0;

    let mut hub2_elec = Vec::new();
    let mut hub2_heat = Vec::new();
    let mut hub2_water = Vec::new();
    let mut hub3_elec = Vec::new();
    let mut hub3_ht = Vec::new();
    let mut hub3_mt = Vec::new();
    let mut hub3_water = Vec::new();
    for t in hours {
        let (h, day) = ((t % 24) as f64, (t / 24) % 7);
        let temp = outdoor_temperature(t);
        let home_set = if (8.0..22.0).contains(&h) { 20.0 } else { 19.0 };
        let office_set = if office_open(h, day) { 20.0 } else { 15.0 };
        let weekend_factor = if weekend(day) { 1.1 } else { 1.0 };

        hub2_elec.push(tenth(residents * per_capita_elec(h) * weekend_factor));
        hub2_heat.push(tenth(250.0 * (home_set - temp)));
        hub2_water.push(tenth(residents * litres_per_day * water_shape(h) / water_norm / 3600.0));

        let industry_elec = if !weekend(day) && (7.0..18.0).contains(&h) { 100.0 } else { 60.0 };
        let office_elec = 0.3 * per_capita_elec(h) * if office_open(h, day) { 1.0 } else { 0.2 };
        hub3_elec.push(tenth(20.0 * industry_elec + office_staff * office_elec));
        let industry_heat = if !weekend(day) && (6.0..20.0).contains(&h) { 50.0 } else { 25.0 };
        hub3_ht.push(tenth(32.0 * industry_heat));
        hub3_mt.push(tenth(150.0 * (office_set - temp)));
        hub3_water.push(tenth(office_staff * 0.59 * litres_per_day * office_water(h, day) / office_norm / 3600.0));
    }
    CaseStudySeries {
        wind_speed,
        irradiance,
        loads: vec![
            ("hub2", "elec", hub2_elec),
            ("hub2", "heat_mt", hub2_heat),
            ("hub2", "water", hub2_water),
            ("hub3", "elec", hub3_elec),
            ("hub3", "heat_ht", hub3_ht),
            ("hub3", "heat_mt", hub3_mt),
            ("hub3", "water", hub3_water),
        ],
    }
}

fn process(id: &str, hub: &str, efficiency: Efficiency, inlets: &[(&str, f64)], outlets: &[(&str, f64)]) -> Process {
    Process {
        id: id.into(),
        hub: hub.into(),
        efficiency,
        inlets: inlets.iter().map(|&(c, f)| Share::new(c, f)).collect(),
        outlets: outlets.iter().map(|&(c, f)| Share::new(c, f)).collect(),
        limits: vec![],
    }
}

fn limited(mut p: Process, carrier: &str, side: Side, max: Vec<f64>, renewable: bool) -> Process {
    p.limits.push(FlowLimit { carrier: carrier.into(), side, max, renewable });
    p
}

fn storage(id: &str, hub: &str, carrier: &str, round_trip: f64, capacity: f64, rate: f64) -> StorageUnit {
    StorageUnit {
        id: id.into(),
        hub: hub.into(),
        carrier: carrier.into(),
        round_trip_efficiency: round_trip,
        capacity,
        max_charge_rate: rate,
        max_discharge_rate: rate,
        initial_soc: 0.0,
        terminal_policy: TerminalPolicy::Free,
    }
}

/// The case study over the first `steps` hours of the week.
pub fn case_study(steps: usize) -> Scenario {
    assert!(steps <= CASE_STUDY_STEPS, "the case study covers at most one week");
    let series = case_study_series(steps);
    let c = |v: f64| vec![v; steps];
    let plain = Efficiency::Plain;
    let mut s = Scenario::new("three-hub-case-study", TimeGrid::uniform(steps, 1.0));
    s.carriers = vec![
        Carrier::energy("elec"),
        Carrier::energy("heat_ht"),
        Carrier::energy("heat_mt"),
        Carrier::energy("h2_lp"),
        Carrier::energy("h2_hp"),
        Carrier::energy("solar"),
        Carrier::energy("wind"),
        Carrier::energy("gas"),
        Carrier::energy("waste"),
        Carrier::material("water", WATER_EXERGY),
    ];
    s.hubs = ["hub1", "hub2", "hub3"].iter().map(|h| Hub { id: h.to_string() }).collect();

    let wind_limit = renewable_limit_series(&WIND_LAW, &series.wind_speed).expect("synthetic weather is valid");
    let solar_limit =
        renewable_limit_series(&RenewableLaw::Solar { area: PVT_AREA }, &series.irradiance).expect("synthetic weather is valid");
    s.processes = vec![
        limited(
            process("fuel_cell", "hub1", plain(0.75), &[("h2_hp", 1.0)], &[("elec", 2.0 / 3.0), ("heat_ht", 1.0 / 3.0)]),
            "elec",
            Side::Outlet,
            c(200.0),
            false,
        ),
        limited(process("electrolyzer", "hub1", plain(0.9), &[("elec", 1.0)], &[("h2_lp", 1.0)]), "h2_lp", Side::Outlet, c(400.0), false),
        limited(
            process("h2_compressor", "hub1", plain(0.9), &[("elec", 0.1), ("h2_lp", 0.9)], &[("h2_hp", 1.0)]),
            "h2_hp",
            Side::Outlet,
            c(400.0),
            false,
        ),
        limited(
            process(
                "desalination",
                "hub1",
                Efficiency::Declared { value: 650.0, unit: CoefficientUnit::KgPerKwh },
                &[("heat_ht", 1.0)],
                &[("water", 1.0)],
            ),
            "water",
            Side::Outlet,
            c(1e5),
            false,
        ),
        limited(
            process("pvt", "hub1", plain(0.5), &[("solar", 1.0)], &[("elec", 0.2), ("heat_mt", 0.8)]),
            "solar",
            Side::Inlet,
            solar_limit,
            true,
        ),
        limited(process("wind_turbine", "hub1", plain(1.0), &[("wind", 1.0)], &[("elec", 1.0)]), "elec", Side::Outlet, wind_limit, true),
        limited(process("gas_boiler", "hub2", plain(0.9), &[("gas", 1.0)], &[("heat_mt", 1.0)]), "heat_mt", Side::Outlet, c(2000.0), false),
        limited(
            process(
                "mt_heat_pump",
                "hub2",
                Efficiency::Declared { value: 4.0, unit: CoefficientUnit::KwPerKw },
                &[("elec", 1.0)],
                &[("heat_mt", 1.0)],
            ),
            "elec",
            Side::Inlet,
            c(500.0),
            false,
        ),
        limited(process("waste_furnace", "hub3", plain(0.85), &[("waste", 1.0)], &[("heat_ht", 1.0)]), "heat_ht", Side::Outlet, c(5000.0), false),
        limited(
            process("ht_heat_pump", "hub3", plain(1.0), &[("elec", 0.25), ("heat_mt", 0.75)], &[("heat_ht", 1.0)]),
            "elec",
            Side::Inlet,
            c(700.0),
            false,
        ),
        limited(
            process("chp", "hub3", plain(0.6), &[("gas", 1.0)], &[("elec", 7.0 / 12.0), ("heat_mt", 5.0 / 12.0)]),
            "elec",
            Side::Outlet,
            c(7200.0),
            false,
        ),
        limited(process("heat_exchanger", "hub3", plain(0.9), &[("heat_ht", 1.0)], &[("heat_mt", 1.0)]), "heat_mt", Side::Outlet, c(1500.0), false),
    ];

    s.storages = vec![
        storage("water_tank", "hub1", "water", 1.0, 40_000.0, 3000.0),
        storage("h2_tank", "hub1", "h2_hp", 0.97, 5000.0, 400.0),
        storage("caes", "hub1", "elec", 0.65, 10_000.0, 1000.0),
        storage("thermal_storage", "hub2", "heat_mt", 0.8, 8000.0, 2000.0),
        storage("battery", "hub2", "elec", 0.85, 4000.0, 1000.0),
    ];

    let import = |hub: &str, carrier: &str, price: f64| Port::new(hub, carrier, PortKind::Import).with_price(c(price));
    let ret = |hub: &str, carrier: &str| Port::new(hub, carrier, PortKind::Return);
    let net = |hub: &str, carrier: &str, max: f64| Port::new(hub, carrier, PortKind::Network).with_max(c(max));
    let rejection = |hub: &str| Port::new(hub, "heat_mt", PortKind::Export).with_price(c(0.0));
    s.ports = vec![
        import("hub1", "solar", 0.0),
        import("hub1", "wind", 0.0),
        ret("hub1", "elec"),
        ret("hub1", "heat_ht"),
        ret("hub1", "h2_lp"),
        ret("hub1", "h2_hp"),
        net("hub1", "elec", 3000.0),
        net("hub1", "heat_ht", 200.0),
        net("hub1", "heat_mt", 2500.0),
        net("hub1", "water", 1.4e5),
        rejection("hub1"),
        import("hub2", "gas", 10.0),
        ret("hub2", "elec"),
        net("hub2", "elec", 5500.0),
        net("hub2", "heat_mt", 5000.0),
        net("hub2", "water", 1.2e5),
        rejection("hub2"),
        import("hub3", "gas", 10.0),
        import("hub3", "waste", 0.0).with_min(c(WASTE_FLOW)).with_max(c(WASTE_FLOW)),
        ret("hub3", "elec"),
        ret("hub3", "heat_ht"),
        ret("hub3", "heat_mt"),
        net("hub3", "elec", 6300.0),
        net("hub3", "heat_ht", 600.0),
        net("hub3", "heat_mt", 5000.0),
        net("hub3", "water", 2.2e4),
        rejection("hub3"),
    ];
    for (hub, carrier, values) in series.loads {
        s.ports.push(Port::new(hub, carrier, PortKind::Load).with_load(values));
    }

    let all = || vec!["hub1".to_string(), "hub2".to_string(), "hub3".to_string()];
    s.networks = vec![
        Network { carrier: "elec".into(), hubs: all(), loss_fraction: NETWORK_LOSS },
        Network { carrier: "heat_ht".into(), hubs: vec!["hub1".into(), "hub3".into()], loss_fraction: NETWORK_LOSS },
        Network { carrier: "heat_mt".into(), hubs: all(), loss_fraction: NETWORK_LOSS },
        Network { carrier: "water".into(), hubs: all(), loss_fraction: NETWORK_LOSS },
    ];
    s
}

fn constant_or_inline(doc: &mut SeriesDoc) {
    if let SeriesDoc::Inline(v) = doc {
        if let Some(&first) = v.first() {
            if v.iter().all(|x| x.to_bits() == first.to_bits()) {
                *doc = SeriesDoc::Constant(first);
            }
        }
    }
}

/// Document text plus series files, as `(relative path, contents)` pairs.
/// Loads and weather live in `series/`; renewable limits are given as laws
/// over the weather files.
pub fn case_study_files(steps: usize) -> Vec<(String, String)> {
    let series = case_study_series(steps);
    let scenario = case_study(steps);
    let mut doc: Document = to_document(&scenario);
    let mut files = vec![
        ("series/wind_speed.csv".to_string(), format_series(&series.wind_speed)),
        ("series/irradiance.csv".to_string(), format_series(&series.irradiance)),
    ];
    for p in &mut doc.processes {
        for l in &mut p.limits {
            match p.id.as_str() {
                "wind_turbine" => {
                    let RenewableLaw::Wind { coefficient, cut_in, cut_off } = WIND_LAW else { unreachable!() };
                    l.max = SeriesDoc::Wind(WindDoc {
                        coefficient,
                        cut_in,
                        cut_off,
                        speed: Box::new(SeriesDoc::File("series/wind_speed.csv".into())),
                    });
                }
                "pvt" => {
                    l.max = SeriesDoc::Solar(SolarDoc {
                        area: PVT_AREA,
                        irradiance: Box::new(SeriesDoc::File("series/irradiance.csv".into())),
                    });
                }
                _ => constant_or_inline(&mut l.max),
            }
        }
    }
    for p in &mut doc.ports {
        for field in [&mut p.price, &mut p.max, &mut p.min].into_iter().flatten() {
            constant_or_inline(field);
        }
        if p.load.is_some() {
            let path = format!("series/load_{}_{}.csv", p.hub, p.carrier);
            let (_, _, values) = series.loads.iter().find(|(h, c, _)| *h == p.hub && *c == p.carrier).unwrap();
            files.push((path.clone(), format_series(values)));
            p.load = Some(SeriesDoc::File(path));
        }
    }
    let mut text = serde_json::to_string_pretty(&doc).expect("documents always serialize");
    text.push('\n');
    files.insert(0, ("case_study.json".to_string(), text));
    files
}

pub fn write_case_study(dir: &Path, steps: usize) -> std::io::Result<()> {
    for (rel, text) in case_study_files(steps) {
        let path = dir.join(rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(path, text)?;
    }
    Ok(())
}
