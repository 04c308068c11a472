use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn credpool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_credpool")).args(args).output().unwrap()
}

fn run(args: &[&str], file: &str) -> Output {
    let path = data(file);
    let mut all: Vec<&str> = args.to_vec();
    all.push(path.to_str().unwrap());
    credpool(&all)
}

fn credences(out: &Output, agent: usize) -> Vec<f64> {
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v["agents"][agent]["credences"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn euclidean_fix_of_the_two_agents() {
    let out = run(&["fix", "--divergence", "sed"], "amira_benito.json");
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(close(&credences(&out, 0), &[0.7, 0.3], 1e-12));
    assert!(close(&credences(&out, 1), &[0.3, 0.7], 1e-12));
}

#[test]
fn kl_fix_is_the_same_in_both_directions() {
    let from = run(&["fix", "--divergence", "gkl", "--direction", "from"], "amira_benito.json");
    let to = run(&["fix", "--divergence", "gkl", "--direction", "to"], "amira_benito.json");
    for k in 0..2 {
        assert!(close(&credences(&from, k), &credences(&to, k), 1e-12));
    }
    assert!(close(&credences(&from, 0), &[5.0 / 6.0, 1.0 / 6.0], 1e-12));
}

#[test]
fn malformed_json_is_an_input_error_without_output() {
    let out = run(&["fix"], "malformed.json");
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(stderr(&out).contains("line 10"));
}

#[test]
fn percentages_are_rejected() {
    let out = run(&["pool"], "percentages.json");
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("agents[0].credences[0]"));
}

#[test]
fn bad_flags_are_input_errors() {
    let out = run(&["fix", "--divergence", "power:0.5"], "amira_benito.json");
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["pool", "--weights", "0.4,0.3,0.3"], "amira_benito.json");
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--weights"));
}

#[test]
fn linear_pool_with_weights_from_the_command_line() {
    let out = run(&["pool", "--method", "lp", "--weights", "0.4,0.6"], "amira_benito.json");
    assert!(close(&credences(&out, 0), &[0.32, 0.40], 1e-12));
}

#[test]
fn second_direction_kl_approximation() {
    let out = run(
        &["wcap", "--divergence", "gkl", "--direction", "to", "--weights", "0.4,0.6"],
        "amira_benito.json",
    );
    assert!(close(&credences(&out, 0), &[4.0 / 9.0, 5.0 / 9.0], 1e-12));
}

#[test]
fn pool_methods_on_the_two_agents() {
    let gp = run(&["pool", "--method", "gp"], "amira_benito.json");
    assert!(close(&credences(&gp, 0), &[0.496, 0.504], 1e-3));
    let agg = run(&["pool", "--method", "agg", "--divergence", "gkl"], "amira_benito.json");
    let minus = run(&["pool", "--method", "gp-minus"], "amira_benito.json");
    assert!(close(&credences(&agg, 0), &credences(&minus, 0), 1e-9));
    let wcap = run(&["pool", "--method", "wcap", "--divergence", "gkl"], "amira_benito.json");
    assert!(close(&credences(&wcap, 0), &credences(&gp, 0), 1e-12));
}

#[test]
fn geometric_pool_of_the_atoms() {
    let out = run(&["pool", "--method", "gp"], "atoms.json");
    assert!(close(&credences(&out, 0), &[0.398, 0.345, 0.257], 1e-3));
}

#[test]
fn geometric_pool_on_a_disjunction_agenda() {
    let out = run(&["pool", "--method", "gp"], "carmen_donal.json");
    assert_eq!(out.status.code(), Some(0));
    assert!(close(&credences(&out, 0), &[0.398, 0.345, 0.257, 0.743], 1e-3));
    let out = run(&["pool", "--method", "gp", "--general-normalize"], "carmen_donal.json");
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(stderr(&out).contains("undefined on a non-partition agenda"));
}

#[test]
fn approximation_on_a_disjunction_agenda() {
    let lp = run(&["wcap", "--divergence", "sed"], "carmen_donal.json");
    assert!(close(&credences(&lp, 0), &[0.4, 0.3, 0.3, 0.7], 1e-6));
    let gkl = run(&["wcap", "--divergence", "gkl", "--tol", "1e-12"], "carmen_donal.json");
    assert!(close(&credences(&gkl, 0), &[0.390, 0.338, 0.272, 0.728], 1e-3));
}

#[test]
fn unnormalized_weights_warn_and_normalize() {
    let out = run(&["pool", "--method", "lp"], "unnormalized_weights.json");
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("warning"));
    assert!(close(&credences(&out, 0), &[0.32, 0.40], 1e-12));
}

#[test]
fn csv_output() {
    let out = run(&["fix", "--format", "csv"], "amira_benito.json");
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,weight,X,not X"));
    assert!(lines.next().unwrap().starts_with("Amira,0.4,0.7,"));
}

#[test]
fn emitted_files_are_valid_input() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    let f = first.to_str().unwrap();
    let s = second.to_str().unwrap();
    let out = run(&["fix", "--divergence", "gkl", "--out", f], "atoms.json");
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let out = credpool(&["fix", "--divergence", "gkl", "--out", s, f]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let a: Value = serde_json::from_slice(&std::fs::read(&first).unwrap()).unwrap();
    let b: Value = serde_json::from_slice(&std::fs::read(&second).unwrap()).unwrap();
    assert_eq!(a["agenda"], b["agenda"]);
    assert_eq!(a["agents"][0]["weight"], b["agents"][0]["weight"]);
}

#[test]
fn identical_invocations_give_identical_bytes() {
    let args = ["wcap", "--divergence", "power:3", "--direction", "to"];
    assert_eq!(run(&args, "amira_benito.json").stdout, run(&args, "amira_benito.json").stdout);
    let args = ["certify", "--claims", "prop2ii,sec9", "--seeds", "5"];
    assert_eq!(credpool(&args).stdout, credpool(&args).stdout);
}

#[test]
fn certify_the_disjunction_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = credpool(&["certify", "--claims", "sec9", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(report["claims"][0]["id"], "sec9");
    assert_eq!(report["claims"][0]["pass"], true);
}

#[test]
fn certify_dominance_from_another_seed() {
    let out = credpool(&["certify", "--seed", "7", "--claims", "thm8"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn certify_a_negative_claim() {
    let out = credpool(&["certify", "--claims", "prop2ii"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let check = &report["claims"][0]["checks"][0];
    assert_eq!(check["expect"], "above");
    assert!(check["value"].as_f64().unwrap() > 1e-4);
    assert!(check["witness"].is_string());
}

#[test]
fn failing_claims_exit_3_and_keep_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = credpool(&["certify", "--claims", "prop5ii", "--seeds", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let report: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(report["pass"], false);
}

#[test]
fn unknown_claims_are_input_errors() {
    let out = credpool(&["certify", "--claims", "nope"]);
    assert_eq!(out.status.code(), Some(1));
}
