use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hagedorn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hagedorn")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn all_pass(report: &Value) -> bool {
    report.as_object().unwrap().values().all(|c| c["pass"] == Value::Bool(true))
}

fn write_standard_frame(dir: &Path) -> String {
    let path = dir.join("standard.json");
    fs::write(&path, r#"{"Q": [[[1.0, 0.0]]], "P": [[[0.0, 1.0]]]}"#).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn validate_fixture_passes() {
    let out = hagedorn(&["validate", "--fixture", "Z3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!(all_pass(&report));
    assert!(report.get("metric_positive_definite").is_some());
}

#[test]
fn validate_random_frame_passes() {
    let out = hagedorn(&["validate", "--random", "3", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn unnormalised_frame_fails_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"Q": [[[1, 0]]], "P": [[[1, 0]]]}"#).unwrap();
    let out = hagedorn(&["validate", "--frame", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["normalisation"]["pass"], Value::Bool(false));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{\"Q\": ").unwrap();
    assert_eq!(hagedorn(&["validate", "--frame", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(hagedorn(&["validate", "--fixture", "Z9"]).status.code(), Some(2));
    assert_eq!(hagedorn(&["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(hagedorn(&["packet", "--Z", "Z1"]).status.code(), Some(2));
}

#[test]
fn poly_table_file_has_every_entry() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    let out = hagedorn(&["poly", "--fixture", "M2", "--k", "7", "6", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let table: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let entries = table["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 8 * 7);
    let corner = entries.iter().find(|e| e["k"] == serde_json::json!([7, 6])).unwrap();
    let terms = corner["terms"].as_array().unwrap();
    assert!(!terms.is_empty());
    assert!(terms.iter().all(|t| t.get("re").is_some() && t.get("im").is_some()));
}

#[test]
fn poly_check_agrees_with_other_constructions() {
    let out = hagedorn(&["poly", "--fixture", "M3", "--k", "4", "4", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(all_pass(&json(&out)));
}

#[test]
fn packet_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = hagedorn(&[
            "packet", "--Z", "Z3", "--k", "2", "1", "--points", "11", "9", "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        fs::read_to_string(path).unwrap()
    };
    let first = run("a.csv");
    assert_eq!(first, run("b.csv"));
    let mut lines = first.lines();
    assert_eq!(lines.next(), Some("x1,x2,re,im,abs"));
    assert_eq!(lines.count(), 11 * 9);
}

#[test]
fn wigner_ground_peak() {
    let out = hagedorn(&["wigner", "--Z", "Z2", "--k", "0", "0", "--l", "0", "0", "--at", "0", "0", "0", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let want = (std::f64::consts::PI * 0.1).powi(-2);
    assert!((v["re"].as_f64().unwrap() - want).abs() < 1e-10 * want);
    assert!(v["im"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn wigner_oracle_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let z = write_standard_frame(dir.path());
    let out = hagedorn(&["wigner", "--Z", &z, "--k", "2", "--l", "1", "--at", "0.2", "-0.1", "--oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["check"]["pass"], Value::Bool(true));
}

#[test]
fn wigner_grid_header() {
    let dir = tempfile::tempdir().unwrap();
    let z = write_standard_frame(dir.path());
    let out = hagedorn(&["wigner", "--Z", &z, "--k", "1", "--l", "1", "--points", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("q1,p1,re,im,abs\n"));
    assert_eq!(text.lines().count(), 1 + 25);
}

#[test]
fn verify_frames_suite_passes() {
    let out = hagedorn(&["verify", "frames", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(all_pass(&json(&out)));
}
