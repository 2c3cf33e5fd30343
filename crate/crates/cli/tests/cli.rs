use std::process::{Command, Output};

use serde_json::Value;

fn steer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steer")).args(args).output().expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = steer(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn close(v: &Value, want: f64, tol: f64) -> bool {
    (v.as_f64().expect("number") - want).abs() <= tol
}

#[test]
fn paradox_example() {
    let doc = json_ok(&["paradox", "--alpha", "0.5236", "--settings", "z,x"]);
    assert!(close(&doc["result"]["quantum_total"], 2.0, 1e-10));
    assert_eq!(doc["result"]["lhs_prediction"], 1.0);
    assert_eq!(doc["metadata"]["tool"], "steer");
    assert_eq!(doc["metadata"]["parameters"]["alpha"], "0.5236".parse::<f64>().unwrap());
}

#[test]
fn paradox_accepts_degrees_and_general_directions() {
    let doc = json_ok(&["paradox", "--alpha", "20deg", "--settings", "z;1.1,0.4;x"]);
    assert!(close(&doc["result"]["quantum_total"], 3.0, 1e-10));
}

#[test]
fn bound_example() {
    let doc = json_ok(&["bound", "--theta", "0.7854", "--directions", "x,y,z"]);
    let s3 = 3f64.sqrt();
    assert!(close(&doc["result"]["c_lhs"], (3.0 + s3) / 2.0, 1e-4));
    assert!(close(&doc["result"]["c_lhs_prime"], s3, 1e-4));
    let exact = json_ok(&["bound", "--theta", "45deg"]);
    assert!(close(&exact["result"]["c_lhs"], (3.0 + s3) / 2.0, 1e-12));
    assert!(close(&exact["result"]["c_lhs_prime"], s3, 1e-12));
}

#[test]
fn prep_example() {
    let doc = json_ok(&["prep", "--alpha", "30deg"]);
    let beta = (std::f64::consts::PI / 6.0).tan().asin();
    assert!(close(&doc["result"]["beta"], beta, 1e-12));
    assert!(close(&doc["result"]["hwp1_deg"], 0.0, 0.0));
    assert!(close(&doc["result"]["hwp2_deg"], beta.to_degrees() / 2.0, 1e-10));
    assert!(close(&doc["result"]["hwp3_deg"], 45.0, 0.0));
}

#[test]
fn eval_round_trip_is_bit_stable() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let out = steer(&[
        "eval", "--family", "asymmetric", "--alpha", "0.3", "--visibility", "0.15", "--theta", "0.4", "--phi", "0.2",
        "--out", first.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let a: Value = serde_json::from_str(&std::fs::read_to_string(&first).unwrap()).unwrap();
    let b = json_ok(&["eval", "--state-file", first.to_str().unwrap(), "--theta", "0.4", "--phi", "0.2"]);
    assert_eq!(a["result"], b["result"]);
}

#[test]
fn scan_csv_matches_golden_file() {
    let out = steer(&["scan", "--family", "werner", "--alpha-steps", "4", "--v-steps", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let got = String::from_utf8(out.stdout).unwrap();
    let want = include_str!("golden/scan_werner_4x3.csv");
    let data = |s: &str| s.lines().filter(|l| !l.starts_with('#')).map(String::from).collect::<Vec<_>>();
    assert_eq!(data(&got), data(want));
    assert_eq!(
        data(&got)[0],
        "family,alpha,visibility,usual_value,usual_bound,usual_detected,glsi_theta_star,glsi_violation,glsi_detected"
    );
    assert!(got.lines().any(|l| l.starts_with("# version=")));
}

#[test]
fn scan_output_independent_of_threads() {
    let run = |t: &str| steer(&["scan", "--family", "asymmetric", "--alpha-steps", "6", "--v-steps", "5", "--threads", t]).stdout;
    assert_eq!(run("1"), run("3"));
}

#[test]
fn full_werner_scan_shape() {
    let out = steer(&["scan", "--family", "werner", "--alpha-steps", "50", "--v-steps", "50", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<String>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 2500);
    let usual = rows.iter().filter(|r| r[5] == "true").count();
    let glsi = rows.iter().filter(|r| r[8] == "true").count();
    assert!(rows.iter().all(|r| r[5] != "true" || r[8] == "true"));
    assert!(glsi > usual, "{glsi} vs {usual}");
}

#[test]
fn simulate_reports_seed_and_counts() {
    let doc = json_ok(&["simulate", "--target", "paradox", "--alpha", "0.6", "--shots", "5000", "--seed", "17"]);
    assert_eq!(doc["metadata"]["seed"], 17);
    assert_eq!(doc["result"]["seed"], 17);
    assert_eq!(doc["result"]["settings"].as_array().unwrap().len(), 4);
    assert!(doc["result"]["generator"].as_str().unwrap().contains("ChaCha20"));
    let again = json_ok(&["simulate", "--target", "paradox", "--alpha", "0.6", "--shots", "5000", "--seed", "17"]);
    assert_eq!(doc, again);
}

#[test]
fn optimize_reports_detection() {
    let doc = json_ok(&["optimize", "--alpha", "0.05"]);
    assert_eq!(doc["result"]["detected"], true);
    let mixed = json_ok(&["optimize", "--family", "werner", "--alpha", "0.5", "--visibility", "0", "--phi-steps", "4"]);
    assert_eq!(mixed["result"]["detected"], false);
}

#[test]
fn svg_outputs_are_self_contained() {
    for args in [
        &["scan", "--family", "werner", "--alpha-steps", "4", "--v-steps", "4", "--format", "svg"][..],
        &["curves", "--alpha-steps", "5", "--format", "svg"][..],
    ] {
        let out = steer(args);
        assert_eq!(out.status.code(), Some(0));
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("<svg") && text.trim_end().ends_with("</svg>"));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(steer(&["paradox", "--alpha", "0.5", "--unknown-flag"]).status.code(), Some(2));
    assert_eq!(steer(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(steer(&["paradox", "--alpha", "0.5", "--format", "csv"]).status.code(), Some(2));
    let bad = steer(&["paradox", "--alpha", "0"]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("not entangled"));
    assert_eq!(steer(&["simulate", "--target", "paradox", "--alpha", "0.5", "--shots", "0"]).status.code(), Some(3));
    assert_eq!(steer(&["paradox", "--settings", "x;x", "--alpha", "0.5"]).status.code(), Some(3));
    assert_eq!(steer(&["--help"]).status.code(), Some(0));
}
