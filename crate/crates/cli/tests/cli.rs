use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mycielski"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).expect("JSON output")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mycielski-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn decide_reports_false_with_exit_one() {
    let o = run(&["decide", "e0", "(0)", "(1)"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o), serde_json::json!({ "verdict": false }));
    let o = run(&["decide", "e0", "1(0)", "(0)"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["decide", "e1", "[(1)](0)", "[(0)](0)"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn delta_is_an_exact_fraction() {
    let o = run(&["delta", "--from", "0", "--to", "4", "(0)", "(1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["value"], "25/12");
    assert_eq!(json(&run(&["delta", "(0)", "(1)"]))["value"], "infinite");
    assert_eq!(json(&run(&["delta", "01(0)", "(0)"]))["value"], "1/2");
}

#[test]
fn malformed_literals_exit_two_with_position() {
    let o = run(&["decide", "e0", "01x(0)", "(1)"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("position 2"), "{err}");
    assert_eq!(run(&["decide", "e9", "(0)", "(1)"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn e0_witness_from_a_seeded_tree_passes() {
    let o = run(&["witness", "e0-3mycielski", "--tree-seed", "7", "--depth", "10000"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["theorem"], "e0-3mycielski");
}

#[test]
fn runs_are_deterministic() {
    for args in [
        &["witness", "e0-3mycielski", "--tree-seed", "11", "--depth", "500"][..],
        &["witness", "jonsson", "--tree-seed", "5"][..],
        &["tree-build", "e0", "--seed", "9"][..],
    ] {
        assert_eq!(stdout(&run(args)), stdout(&run(args)));
    }
}

#[test]
fn every_certificate_round_trips() {
    for tag in [
        "e0-3mycielski",
        "e0-weak-3mycielski",
        "e1-2mycielski",
        "e2-2mycielski",
        "e2-weak-2mycielski",
        "e3-2mycielski",
        "e3-grid-system",
        "e2-surjectivity",
        "jonsson",
        "e0-gadget",
        "e2-gadget",
    ] {
        let path = tmp(&format!("{tag}.json"));
        let o = run(&["witness", tag, "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{tag}");
        assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&o));
        let v = run(&["cert-verify", path.to_str().unwrap()]);
        assert_eq!(v.status.code(), Some(0), "{tag}");
        assert_eq!(json(&v)["identical"], true);
    }
}

#[test]
fn negative_control_is_flagged_and_fails() {
    let o = run(&["witness", "e1-2mycielski", "--oracle", "leaky", "--stages", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["expected_failure"], true);
    assert_eq!(v["verdict"], "fail");
}

#[test]
fn default_thresholds_report_budget_exhaustion() {
    let o = run(&["witness", "e2-surjectivity", "--theta", "default", "--levels", "40"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["verdict"], "budget-exhausted");
}

#[test]
fn tampered_certificate_is_rejected() {
    let path = tmp("tampered.json");
    let o = run(&["witness", "e3-2mycielski", "--stages", "3"]);
    std::fs::write(&path, stdout(&o).replace("\"pass\"", "\"fail\"")).unwrap();
    let v = run(&["cert-verify", path.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    assert_eq!(json(&v)["identical"], false);
}

#[test]
fn built_trees_verify() {
    let path = tmp("e2.json");
    std::fs::write(&path, stdout(&run(&["tree-build", "e2", "--levels", "5"]))).unwrap();
    let o = run(&["tree-verify", "e2", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["theorem"], "e2-tree");
    let path = tmp("e0.json");
    std::fs::write(&path, stdout(&run(&["tree-build", "e0", "--seed", "3"]))).unwrap();
    assert_eq!(run(&["tree-verify", "e0", path.to_str().unwrap()]).status.code(), Some(0));
    let x = run(&["map", "e0-phi", "--tree", path.to_str().unwrap(), "(01)"]);
    assert_eq!(x.status.code(), Some(0));
}

#[test]
fn maps_evaluate_literals() {
    let o = run(&["map", "p-e0", "(0)", "(1)", "(01)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["value"].is_string());
    let o = run(&["map", "p-e2", "--theta", "2,3,9/2", "--len", "2", "(0)", "(1)", "(01)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["map", "p-e0", "(0)", "(1)", "(1)"]).status.code(), Some(2));
}
