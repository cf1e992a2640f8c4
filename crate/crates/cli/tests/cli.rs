use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_synth-audit"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn tiny(extra: &[&str]) -> Output {
    let mut c = bin();
    c.arg("evaluate")
        .arg("--real")
        .arg(fixture("f_tiny_real.csv"))
        .arg("--synth")
        .arg(fixture("f_tiny_synth.csv"))
        .arg("--schema")
        .arg(fixture("f_tiny.schema.json"))
        .args(["--keys", "sex,smoker", "--sensitive", "age"])
        .args(extra);
    c.output().unwrap()
}

fn score(report: &Value, id: &str) -> f64 {
    report["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["id"] == id)
        .unwrap_or_else(|| panic!("{id} missing"))["normalized_score"]
        .as_f64()
        .unwrap()
}

fn schema_validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/report.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

#[test]
fn tiny_report_values() {
    let out = tiny(&[]);
    // d-mlp cannot stratify four rows per class into five folds
    assert_eq!(out.status.code(), Some(3));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["results"].as_array().unwrap().len(), 17);
    assert_eq!(score(&report, "zcap"), 0.25);
    assert!((score(&report, "gcap") - 1.0 / 3.0).abs() < 1e-9);
    assert!((score(&report, "air") - 0.5).abs() < 1e-9);
    assert!((score(&report, "crp") - 0.25).abs() < 1e-8);
    assert_eq!(score(&report, "hitting_rate"), 0.25);
    let dmlp = report["results"].as_array().unwrap().iter().find(|r| r["id"] == "dmlp").unwrap();
    assert!(dmlp["error"].is_string());
}

#[test]
fn select_gives_single_entry_and_success() {
    let out = tiny(&["--select", "crp"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let results = report["results"].as_array().unwrap();
    assert_eq!(results.len(), 1);
    assert_eq!(results[0]["id"], "crp");
}

#[test]
fn reports_validate_against_schema() {
    let v = schema_validator();
    for extra in [&[][..], &["--select", "crp,hidden_rate"][..], &["--seed", "7", "--projection-k", "1"][..]] {
        let out = tiny(extra);
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        let errors: Vec<String> = v.iter_errors(&report).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{errors:?}");
    }
}

#[test]
fn markdown_matches_json() {
    let json: Value = serde_json::from_slice(&tiny(&["--select", "zcap,gcap,crp"]).stdout).unwrap();
    let md = String::from_utf8(tiny(&["--select", "zcap,gcap,crp", "--format", "markdown"]).stdout).unwrap();
    for id in ["zcap", "gcap", "crp"] {
        let line = md.lines().find(|l| l.starts_with(&format!("| {id} |"))).unwrap();
        let cells: Vec<&str> = line.split('|').map(str::trim).collect();
        assert_eq!(cells[3], format!("{:.6}", score(&json, id)));
    }
}

#[test]
fn writes_to_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = tiny(&["--select", "zcap", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(score(&report, "zcap"), 0.25);
}

#[test]
fn input_errors_exit_2() {
    let out = bin()
        .args(["evaluate", "--real"])
        .arg(fixture("f_tiny_real.csv"))
        .arg("--synth")
        .arg(fixture("f_tiny_synth.csv"))
        .args(["--schema", "/nonexistent/schema.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema.json"));

    assert_eq!(tiny(&["--select", "nope"]).status.code(), Some(2));
    assert_eq!(tiny(&["--cvp-threshold", "1.5"]).status.code(), Some(2));
    assert_eq!(bin().args(["list-metrics", "--bogus"]).output().unwrap().status.code(), Some(2));
    assert_eq!(bin().args(["oracle", "--trials", "0"]).output().unwrap().status.code(), Some(2));
}

#[test]
fn generation_map_file() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("map.csv");
    std::fs::write(&map, "real_index,synthetic_index\n0,1\n1,0\n2,2\n3,3\n").unwrap();
    let out = bin()
        .arg("evaluate")
        .arg("--real")
        .arg(fixture("f_num_real.csv"))
        .arg("--synth")
        .arg(fixture("f_num_synth.csv"))
        .arg("--schema")
        .arg(fixture("f_num.schema.json"))
        .args(["--select", "hidden_rate", "--gen-map"])
        .arg(&map)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    // y1 and y2 now miss; y3 still hits; y4 still lands on z3
    assert_eq!(score(&report, "hidden_rate"), 0.25);
    assert!(report["inputs"]["generation_map_sha256"].is_string());

    std::fs::write(&map, "real_index,synthetic_index\n0,1\n").unwrap();
    let out = bin()
        .arg("evaluate")
        .arg("--real")
        .arg(fixture("f_num_real.csv"))
        .arg("--synth")
        .arg(fixture("f_num_synth.csv"))
        .arg("--schema")
        .arg(fixture("f_num.schema.json"))
        .arg("--gen-map")
        .arg(&map)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn list_metrics_formats() {
    let text = bin().arg("list-metrics").output().unwrap();
    assert_eq!(text.status.code(), Some(0));
    assert_eq!(String::from_utf8(text.stdout).unwrap().lines().count(), 18);
    let json = bin().args(["list-metrics", "--format", "json"]).output().unwrap();
    let rows: Value = serde_json::from_slice(&json.stdout).unwrap();
    let ids: Vec<&str> = rows.as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert_eq!(ids.len(), 17);
    assert_eq!(ids[0], "zcap");
    assert_eq!(ids[16], "hitting_rate");
}

#[test]
fn oracle_is_reproducible() {
    let run = || bin().args(["oracle", "--trials", "20", "--max-n", "12", "--seed", "3"]).output().unwrap();
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn thread_cap_is_respected_and_validated() {
    let out = tiny(&["--select", "crp"]);
    let capped = {
        let mut c = bin();
        c.env("SYNTH_AUDIT_THREADS", "1")
            .arg("evaluate")
            .arg("--real")
            .arg(fixture("f_tiny_real.csv"))
            .arg("--synth")
            .arg(fixture("f_tiny_synth.csv"))
            .arg("--schema")
            .arg(fixture("f_tiny.schema.json"))
            .args(["--select", "crp"]);
        c.output().unwrap()
    };
    assert_eq!(capped.status.code(), Some(0));
    let strip = |o: &Output| -> String {
        String::from_utf8_lossy(&o.stdout)
            .lines()
            .filter(|l| !l.contains("elapsed_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    // role flags differ between the two runs, so compare only the score lines
    let pick = |s: String| s.lines().filter(|l| l.contains("_score")).map(str::to_string).collect::<Vec<_>>();
    assert_eq!(pick(strip(&out)), pick(strip(&capped)));
    let bad = bin().env("SYNTH_AUDIT_THREADS", "zero").arg("list-metrics").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
