use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twist-rod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is JSON"))
        .collect()
}

fn close(a: &Value, b: f64, tol: f64) -> bool {
    (a.as_f64().unwrap() - b).abs() <= tol * b.abs()
}

#[test]
fn analyze_constant_rod() {
    let spec = data("constant.json");
    let out = run(&["analyze", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert!(close(&report["M_star"], 2.0 * PI, 1e-12));
    assert!(close(&report["ratio"], 1.0, 1e-12));
    assert_eq!(report["input"]["shape"]["kind"], "constant");
    assert!(report.get("oracle").map_or(true, Value::is_null));
}

#[test]
fn analyze_stepped_rod() {
    let spec = data("stepped.json");
    let out = run(&["analyze", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert!(close(&report["M_star"], 8.0 * PI / 3.0, 1e-12));
    assert!(close(&report["M_bound"], 3.0 * PI, 1e-12));
    assert!(close(&report["ratio"], 8.0 / 9.0, 1e-12));
    assert!(close(&report["l_physical"], 0.75, 1e-12));
}

#[test]
fn analyze_with_oracle_and_mode_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("mode.csv");
    let spec = data("constant.json");
    let out = run(&[
        "analyze",
        "--spec",
        spec.to_str().unwrap(),
        "--oracle",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert!(report["oracle"]["disagreement"].as_f64().unwrap() <= 1e-8);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,z"));
    assert_eq!(lines.count(), 4096);
}

#[test]
fn analyze_anisotropic_rod() {
    let spec = data("anisotropic.json");
    let out = run(&["analyze", "--spec", spec.to_str().unwrap(), "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    // sqrt(Jy Jz) = 2 doubles the stepped-rod torque
    assert!(close(&report["M_star"], 16.0 * PI / 3.0, 1e-12));
    assert!(report["oracle"]["disagreement"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn malformed_input_exits_2_with_location() {
    let spec = data("malformed.json");
    let out = run(&["analyze", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
    assert!(err.contains("shape.L"), "{err}");

    let out = run(&["analyze", "--spec", "/nonexistent/rod.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn optimize_two_segment_problem() {
    let spec = data("two_segment.json");
    let out = run(&["optimize", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    let last = lines.last().unwrap();
    assert_eq!(last["converged"], true);
    assert!(last["lagrange_gap"].as_f64().unwrap() <= 1e-3);
    // 2 pi E alpha V / L^2 with E = alpha = L = 1, V = 2
    assert!(close(&last["M_star"], 4.0 * PI, 1e-6));
    assert_eq!(last["input"]["problem"]["init"], serde_json::json!([1.0, 3.0]));
}

#[test]
fn optimize_uniform_init_stops_at_iteration_zero() {
    let spec = data("uniform_init.json");
    let out = run(&["optimize", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["iteration"], 0);
    assert_eq!(lines[1]["iterations"], 0);
    assert_eq!(lines[1]["converged"], true);
}

#[test]
fn optimize_random_init_matches_golden_trace() {
    let spec = data("random_init.json");
    let out = run(&["optimize", "--spec", spec.to_str().unwrap(), "--segments", "8", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read_to_string(data("optimize_segments8_seed7.jsonl")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn optimize_not_converged_exits_4_with_trace() {
    let spec = data("random_init.json");
    let out = run(&["optimize", "--spec", spec.to_str().unwrap(), "--max-iters", "1"]);
    assert_eq!(out.status.code(), Some(4));
    let lines = json_lines(&out);
    assert_eq!(lines.last().unwrap()["converged"], false);
}

#[test]
fn verify_default_run_passes() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let summary = stdout_json(&out);
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["n"], 50);
    let suites = summary["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 3);
    assert!(suites[0]["max_disagreement"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--seed", "42", "--n", "5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_detects_wrong_exponent() {
    let out = run(&["verify", "--seed", "42", "--n", "6", "--inject-wrong-exponent"]);
    assert_eq!(out.status.code(), Some(1));
    let summary = stdout_json(&out);
    let bound = &summary["suites"][1];
    assert_eq!(bound["passed"], false);
    let violation = &bound["violations"][0];
    assert!(violation["seed"].as_u64().is_some());
    assert!(violation["case"].as_u64().is_some());
}
