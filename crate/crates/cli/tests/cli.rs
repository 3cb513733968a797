use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hubflow_core::io::{load_scenario, save_scenario};
use hubflow_core::scenarios::{toy_boiler, write_case_study};

fn hubflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hubflow"))
        .args(args)
        .env("HUBFLOW_LOG", "error")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn toy_file(dir: &Path) -> PathBuf {
    let path = dir.join("toy.json");
    save_scenario(&toy_boiler(1), &path).unwrap();
    path
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn toy_boiler_costs_one_hundred() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = toy_file(tmp.path());
    let out = tmp.path().join("out");
    let o = hubflow(&["solve", s(&scenario), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("status=optimal"));
    let m = manifest(&out);
    assert!((m["objective"].as_f64().unwrap() - 100.0).abs() < 1e-9);
    assert_eq!(m["status"], "optimal");
    assert!(out.join("totals.csv").exists());
    assert!(out.join("hub1_IMP.csv").exists());
}

#[test]
fn case_study_validates() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&hubflow(&["case-study", s(tmp.path())])), 0);
    let o = hubflow(&["validate", s(&tmp.path().join("case_study.json"))]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("3 hubs, 12 processes"));
}

#[test]
fn fraction_sum_violation_is_invalid() {
    let tmp = tempfile::tempdir().unwrap();
    let path = toy_file(tmp.path());
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["processes"][0]["outlets"][0]["fraction"] = serde_json::json!(0.7);
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = hubflow(&["validate", s(&path)]);
    assert_eq!(code(&o), 1);
    assert!(format!("{}{}", stdout(&o), stderr(&o)).contains("FRACTION_SUM"));
    let o = hubflow(&["solve", s(&path), "--out", s(&tmp.path().join("out"))]);
    assert_eq!(code(&o), 1);
}

#[test]
fn missing_series_file_is_an_input_error() {
    let tmp = tempfile::tempdir().unwrap();
    write_case_study(tmp.path(), 24).unwrap();
    std::fs::remove_file(tmp.path().join("series/wind_speed.csv")).unwrap();
    let o = hubflow(&["validate", s(&tmp.path().join("case_study.json"))]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn overloaded_case_study_names_the_binding_balance() {
    let tmp = tempfile::tempdir().unwrap();
    write_case_study(tmp.path(), 168).unwrap();
    let loaded = load_scenario(&tmp.path().join("case_study.json")).unwrap();
    let path = tmp.path().join("overloaded.json");
    save_scenario(&loaded.scenario.with_scaled_loads(100.0), &path).unwrap();
    let out = tmp.path().join("out");
    let o = hubflow(&["solve", s(&path), "--out", s(&out)]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let line = stderr(&o).lines().find(|l| l.contains("status=infeasible")).expect("reason line").to_string();
    let field = |k: &str| {
        line.split_whitespace()
            .find_map(|w| w.strip_prefix(&format!("{k}=")))
            .map(str::to_string)
            .unwrap_or_default()
    };
    assert!(["hub1", "hub2", "hub3"].contains(&field("hub").as_str()), "{line}");
    assert_ne!(field("carrier"), "-", "{line}");
    assert_eq!(manifest(&out)["exit_code"], 3);
}

#[test]
fn mps_export_is_hashed_in_the_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = toy_file(tmp.path());
    let out = tmp.path().join("out");
    let mps = tmp.path().join("toy.mps");
    let o = hubflow(&["solve", s(&scenario), "--out", s(&out), "--export-mps", s(&mps)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let bytes = std::fs::read(&mps).unwrap();
    use sha2::Digest;
    let digest = hex::encode(sha2::Sha256::digest(&bytes));
    assert_eq!(manifest(&out)["exports"]["mps"]["sha256"], digest);
}

#[test]
fn report_rerenders_a_fresh_solve() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = toy_file(tmp.path());
    let out = tmp.path().join("out");
    assert_eq!(code(&hubflow(&["solve", s(&scenario), "--out", s(&out)])), 0);
    let o = hubflow(&["report", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("total kWh"));
    assert!(text.lines().any(|l| l.split_whitespace().take(3).eq(["hub1", "import", "gas"]) && l.contains("1.000000e1")), "{text}");
    assert!(text.contains("closure"));
}

#[test]
fn tampered_bundle_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = toy_file(tmp.path());
    let out = tmp.path().join("out");
    assert_eq!(code(&hubflow(&["solve", s(&scenario), "--out", s(&out)])), 0);
    let totals = out.join("totals.csv");
    let text = std::fs::read_to_string(&totals).unwrap();
    let kept: Vec<&str> = text.lines().take(1).collect();
    std::fs::write(&totals, format!("{}\n", kept.join("\n"))).unwrap();
    let o = hubflow(&["report", s(&out)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("checksum mismatch"));
}

#[test]
fn empty_directory_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&hubflow(&["report", s(tmp.path())])), 2);
}

#[test]
fn repeated_runs_write_identical_bundles() {
    let tmp = tempfile::tempdir().unwrap();
    write_case_study(tmp.path(), 24).unwrap();
    let scenario = tmp.path().join("case_study.json");
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        let o = hubflow(&["solve", s(&scenario), "--out", s(dir)]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let (ma, mb) = (manifest(&a), manifest(&b));
    assert_eq!(ma["objective"], mb["objective"]);
    assert_eq!(ma["files"], mb["files"]);
    for name in ma["files"].as_object().unwrap().keys() {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn manifest_scenario_hash_tracks_scenario_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = toy_file(tmp.path());
    let run = |out: &str| {
        let dir = tmp.path().join(out);
        assert_eq!(code(&hubflow(&["solve", s(&scenario), "--out", s(&dir)])), 0);
        manifest(&dir)["scenario"]["sha256"].clone()
    };
    let first = run("a");
    assert_eq!(first, run("b"));
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&scenario).unwrap()).unwrap();
    doc["name"] = serde_json::json!("renamed");
    std::fs::write(&scenario, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    assert_ne!(first, run("c"));
}

#[test]
fn loss_orientation_flag_is_recorded() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = toy_file(tmp.path());
    let out = tmp.path().join("out");
    let o = hubflow(&["solve", s(&scenario), "--out", s(&out), "--loss-orientation", "paper", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let m = manifest(&out);
    assert_eq!(m["options"]["loss_orientation"], "paper");
    assert_eq!(m["options"]["seed"], 7);
    let o = hubflow(&["solve", s(&scenario), "--out", s(&out), "--loss-orientation", "sideways"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn iteration_limit_has_its_own_exit_code() {
    let tmp = tempfile::tempdir().unwrap();
    write_case_study(tmp.path(), 24).unwrap();
    let out = tmp.path().join("out");
    let o = hubflow(&["solve", s(&tmp.path().join("case_study.json")), "--out", s(&out), "--max-iterations", "3"]);
    assert_eq!(code(&o), 5, "{}", stderr(&o));
    assert!(stderr(&o).contains("status=iteration_limit"));
}
