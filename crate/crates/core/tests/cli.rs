use std::path::{Path, PathBuf};
use std::process::Command;

use bigramsey::cli::run;
use bigramsey::Error;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn ok(args: &[&str]) -> String {
    let mut full = vec!["bigramsey"];
    full.extend_from_slice(args);
    run(full).unwrap_or_else(|e| panic!("{args:?}: {e}"))
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bigramsey"))
}

#[test]
fn tree_enumerate_text_and_json() {
    let text = ok(&["tree", "enumerate", "--kind", "t2", "--height", "4"]);
    assert!(text.starts_with("t2 below height 4: 12 nodes\n"));
    assert!(text.contains("level 3 (8): "));
    let json: serde_json::Value =
        serde_json::from_str(&ok(&["--format", "json", "tree", "enumerate", "--kind", "t1", "--height", "3"])).unwrap();
    assert_eq!(json["level_counts"], serde_json::json!([1, 2, 4]));
    assert_eq!(json["levels"][1], serde_json::json!(["0", "1"]));
}

#[test]
fn budget_nodes_is_enforced() {
    let r = run(["bigramsey", "tree", "enumerate", "--kind", "t2", "--height", "5", "--budget-nodes", "20"]);
    assert!(matches!(r, Err(Error::Budget { .. })));
}

#[test]
fn embed_reports_codes() {
    let text = ok(&["embed", "--hypergraph", &data("example4.hg")]);
    assert!(text.contains("vertex 2\n5\n0 0 0 0 0\n0 0 0 0 0\n0 0 0 0 0\n1 1 0 0 0\n0 0 0 0 0\n"));
    assert!(text.contains("edges preserved: true"));
    assert!(text.contains("parity checks: pass"));
}

#[test]
fn envelope_report() {
    let text = ok(&["envelope", "--vertices", "1,2,3", "--hypergraph", &data("example4.hg")]);
    assert!(text.contains("[pass] containment"));
    assert!(!text.contains("[fail]"));
    assert!(run(["bigramsey", "envelope", "--vertices", "1,x", "--hypergraph", &data("example4.hg")]).is_err());
}

#[test]
fn copies_and_bounds() {
    assert!(ok(&["copies", "--pattern", &data("vertex.hg"), "--height", "4"]).starts_with("copies: 12\n"));
    let j: serde_json::Value =
        serde_json::from_str(&ok(&["degree-bound", "--pattern", &data("vertex.hg"), "--format", "json"])).unwrap();
    assert_eq!(j["ell"], 76);
    assert_eq!(j["partial"], false);
    let t = ok(&["degree-bound", "--pattern", &data("edge.hg"), "--height", "4"]);
    assert!(t.contains("ell: 126") && t.contains("partial: true"));
}

#[test]
fn milliken_witness_round_trips_through_valuation() {
    let dir = tempfile::tempdir().unwrap();
    let w: PathBuf = dir.path().join("witness.txt");
    let w_s = w.display().to_string();
    let none = ok(&["milliken", "--height", "2", "--sub-height", "1", "--target", "2", "--coloring", "parity"]);
    assert!(none.starts_with("none, exhausted"));
    let out = ok(&[
        "milliken", "--height", "3", "--sub-height", "1", "--target", "2", "--coloring", "parity", "--out", &w_s,
    ]);
    assert!(out.is_empty());
    let text = ok(&["valuation", "--subtree", &w_s]);
    assert!(text.contains("verified: true"));
}

#[test]
fn pipeline_runs_and_is_deterministic() {
    let args = [
        "pipeline",
        "--pattern",
        &data("edge.hg"),
        "--coloring",
        "hash:2",
        "--budget",
        "prefix=24,piece=4",
        "--format",
        "json",
    ];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    let j: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(j["within_bound"], true);
    assert!(run(["bigramsey", "pipeline", "--pattern", &data("edge.hg"), "--coloring", "hash", "--budget", "x=1"])
        .is_err());
}

#[test]
fn binary_exit_codes_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tree.json");
    let st = bin()
        .args(["tree", "enumerate", "--kind", "t1", "--height", "2", "--format", "json", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(st.success());
    let j: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(j["level_counts"], serde_json::json!([1, 2]));

    let usage = bin().args(["tree", "enumerate", "--kind", "t3", "--height", "2"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let budget = bin()
        .args(["tree", "enumerate", "--kind", "t2", "--height", "6", "--budget-nodes", "10"])
        .output()
        .unwrap();
    assert_eq!(budget.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&budget.stderr).contains("budget exceeded"));
    let missing = bin().args(["embed", "--hypergraph", "/nonexistent/file"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
}
