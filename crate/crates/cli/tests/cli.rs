use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn ncstar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncstar")).args(args).env_remove("NCSTAR_JOBS").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn write_pair(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const NON_NORMAL: &str = r#"{"n":2,"epsilon":[[0,1],[1,0]],"eta":[[0,0],[0,0]]}"#;
const MERGED: &str = r#"{"n":2,"epsilon":[[0,1],[1,0]],"eta":[[0,1],[1,0]]}"#;
const CLASSICAL: &str = r#"{"n":2,"epsilon":[[0,1],[1,0]],"eta":[[1,1],[1,1]]}"#;

#[test]
fn regularize_leaves_a_regular_pair_alone() {
    let dir = tempfile::tempdir().unwrap();
    let o = ncstar(&["regularize", write_pair(dir.path(), "p.json", NON_NORMAL).to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("regular: true") && out.contains("unchanged"), "{out}");
}

#[test]
fn regularize_promotes_the_diagonal_and_writes_the_pair() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_pair(dir.path(), "p.json", MERGED);
    let out_pair = dir.path().join("reg.json");
    let o =
        ncstar(&["regularize", input.to_str().unwrap(), "--pair-out", out_pair.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["report"]["regularized"]["eta"], serde_json::json!([[1, 1], [1, 1]]));
    assert_eq!(v["report"]["changed"], true);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(out_pair).unwrap()).unwrap();
    assert_eq!(written, v["report"]["regularized"]);
}

#[test]
fn regularize_consistency_at_product_bound_four() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_pair(dir.path(), "p.json", MERGED);
    let o =
        ncstar(&["regularize", input.to_str().unwrap(), "--consistency", "--product-bound", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["report"]["consistency"]["inconclusive"], 0);
}

#[test]
fn asymmetric_pair_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_pair(dir.path(), "p.json", r#"{"n":2,"epsilon":[[0,1],[0,0]]}"#);
    let o = ncstar(&["regularize", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(1,2)"));
}

#[test]
fn missing_file_and_bad_flags_exit_two() {
    assert_eq!(ncstar(&["regularize", "/nonexistent/pair.json"]).status.code(), Some(2));
    assert_eq!(ncstar(&["verify", "hopf"]).status.code(), Some(2));
    assert_eq!(ncstar(&["verify", "noninjectivity", "--product-bound", "5"]).status.code(), Some(2));
    assert_eq!(ncstar(&["verify", "noninjectivity", "--bound", "3"]).status.code(), Some(2));
    assert_eq!(ncstar(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_hopf_on_the_classical_pair() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_pair(dir.path(), "p.json", CLASSICAL);
    let o = ncstar(&["verify", "hopf", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("overall: proved-zero\n"));
}

#[test]
fn verify_noninjectivity_cites_the_coefficient_and_the_witness() {
    let o = ncstar(&["verify", "noninjectivity"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("normalizes to 2 u11 u21*"), "{out}");
    assert!(out.contains("image diag(0, 0, 0, 0.5"), "{out}");
}

#[test]
fn sphere_action_on_a_non_regular_pair_notes_the_regularization() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_pair(dir.path(), "p.json", MERGED);
    let o = ncstar(&["verify", "sphere-action", input.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["report"].as_array().unwrap().len(), 2);
    assert!(v["report"][0]["notices"][0].as_str().unwrap().contains("regularized first"));
}

#[test]
fn tuple_action_single_side() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_pair(dir.path(), "p.json", NON_NORMAL);
    let o = ncstar(&["verify", "tuple-action", input.to_str().unwrap(), "--side", "beta", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["report"][0]["task"], "tuple-action/beta");
}

#[test]
fn sweep_counts() {
    let o = ncstar(&["sweep", "--n", "2", "--targets", "hopf,sphere-action", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let entries = v["report"]["entries"].as_array().unwrap();
    assert_eq!(entries.iter().filter(|e| e["target"] == "hopf").count(), 16);
    let action = entries.iter().filter(|e| e["target"] == "sphere-action").count();
    assert!(action > 0 && action < 32 && action % 2 == 0, "{action}");

    let o = ncstar(&["sweep", "--n", "3", "--targets", "tuple-action", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["report"]["runs"], 16);
}

#[test]
fn sweep_guards() {
    assert_eq!(ncstar(&["sweep", "--n", "5"]).status.code(), Some(2));
    assert_eq!(ncstar(&["sweep", "--n", "4"]).status.code(), Some(2));
    let o = ncstar(&["sweep", "--n", "4", "--sample", "2", "--targets", "hopf"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn witness_suites() {
    for suite in ["remark-products", "o2plus"] {
        let o = ncstar(&["witness", suite, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0));
        let v = json(&o);
        assert_eq!(v["report"]["rank"], v["report"]["expected_rank"]);
    }
    let o = ncstar(&["witness", "torus", "--angles", "0,0", "--angles", "0,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("degenerate"));
    assert_eq!(ncstar(&["witness", "heisenberg"]).status.code(), Some(2));
    assert_eq!(ncstar(&["witness", "o2plus", "--angles", "0,90"]).status.code(), Some(2));
}

#[test]
fn json_is_reproducible_and_carries_provenance() {
    let a = ncstar(&["verify", "noninjectivity", "--format", "json"]);
    let b = ncstar(&["verify", "noninjectivity", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
    assert!(v["report"][0]["checks"][0].get("micros").is_none());
    let t = json(&ncstar(&["verify", "noninjectivity", "--format", "json", "--timings"]));
    assert_eq!(t["config_hash"], v["config_hash"]);
    let s = json(&ncstar(&["verify", "noninjectivity", "--format", "json", "--seed", "3"]));
    assert_ne!(s["config_hash"], v["config_hash"]);
}

#[test]
fn output_file_and_jobs_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = Command::new(env!("CARGO_BIN_EXE_ncstar"))
        .args(["witness", "o2plus", "--format", "json", "--output", out.to_str().unwrap()])
        .env("NCSTAR_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["report"]["residual_max"], 0.0);
    let bad = Command::new(env!("CARGO_BIN_EXE_ncstar"))
        .args(["witness", "o2plus"])
        .env("NCSTAR_JOBS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
