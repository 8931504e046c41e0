use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_distrealize"))
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn triangle_feasible_witness() {
    let out = run(&["decide", "--input", path_str(&golden("triangle_feasible.json"))]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    let weights: Vec<&str> =
        doc["witness"]["edges"].as_array().unwrap().iter().map(|e| e["weight"].as_str().unwrap()).collect();
    assert_eq!(weights, ["4", "2", "2"]);
    assert_eq!(doc["verification"]["passed"], true);
}

#[test]
fn triangle_infeasible_cites_pair() {
    let out = run(&["decide", "--input", path_str(&golden("triangle_infeasible.json"))]);
    assert_eq!(code(&out), 1);
    let doc = json(&out);
    assert_eq!(doc["violation"]["pair"], serde_json::json!([1, 2]));
    assert_eq!(doc["violation"]["slack"], "1");
}

#[test]
fn distinct_sums_certificates_per_candidate() {
    let input = golden("distinct_sums.json");
    let out = run(&["decide", "--input", path_str(&input), "--emit-certificate"]);
    assert_eq!(code(&out), 1);
    let doc = json(&out);
    assert_eq!(doc["candidates_refuted"], 4);
    assert_eq!(doc["certificates"].as_array().unwrap().len(), 4);

    let quiet = json(&run(&["decide", "--input", path_str(&input)]));
    assert!(quiet.get("certificates").is_none());
}

#[test]
fn raw_strategy_matches_golden_decision() {
    let out = run(&["decide", "--input", path_str(&golden("unit_quartet.json")), "--strategy", "raw"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["splits"], serde_json::json!(["(1,2|3,4)"]));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("result.json");
    let out = run(&["decide", "--input", path_str(&golden("unit_quartet.json")), "--output", path_str(&target)]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let frozen = std::fs::read_to_string(golden("unit_quartet.result.json")).unwrap();
    assert_eq!(std::fs::read_to_string(&target).unwrap(), frozen);
}

#[test]
fn duplicate_pair_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("dup.json");
    std::fs::write(
        &input,
        r#"{"n": 3, "variant": "graph-closed", "intervals": [
            {"i": 1, "j": 2, "lo": "1", "hi": "2"},
            {"i": 2, "j": 1, "lo": "1", "hi": "2"},
            {"i": 2, "j": 3, "lo": "1", "hi": "2"}]}"#,
    )
    .unwrap();
    let out = run(&["decide", "--input", path_str(&input)]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("duplicate pair {1,2}"), "{err}");
}

#[test]
fn float_rational_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("float.json");
    std::fs::write(
        &input,
        r#"{"n": 2, "variant": "graph-closed", "intervals": [{"i": 1, "j": 2, "lo": "1.5", "hi": "2"}]}"#,
    )
    .unwrap();
    let out = run(&["decide", "--input", path_str(&input)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("intervals[0].lo"));
}

#[test]
fn missing_file_is_input_error() {
    assert_eq!(code(&run(&["decide", "--input", "/nonexistent/instance.json"])), 2);
}

#[test]
fn decide_then_verify_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["triangle_feasible.json", "unit_quartet.json"] {
        let result = dir.path().join("result.json");
        let input = golden(name);
        assert_eq!(code(&run(&["decide", "--input", path_str(&input), "--output", path_str(&result)])), 0);
        let out = run(&["verify", "--input", path_str(&input), "--witness", path_str(&result)]);
        assert_eq!(code(&out), 0, "{name}");
        assert_eq!(json(&out)["passed"], true);
    }
}

fn write_witness(dir: &Path, witness: Value) -> PathBuf {
    let path = dir.join("witness.json");
    std::fs::write(&path, witness.to_string()).unwrap();
    path
}

#[test]
fn perturbed_witness_fails_with_pair() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json(&run(&["decide", "--input", path_str(&golden("unit_quartet.json"))]));
    let mut witness = doc["witness"].clone();
    // The first edge is the pendant edge of leaf 1.
    witness["edges"][0]["weight"] = Value::from("11");
    let path = write_witness(dir.path(), witness);
    let out = run(&["verify", "--input", path_str(&golden("unit_quartet.json")), "--witness", path_str(&path)]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    let failing: Vec<_> = report["pairs"].as_array().unwrap().iter().filter(|p| p["ok"] == false).collect();
    assert_eq!(failing.len(), 3);
    assert!(failing.iter().all(|p| p["i"] == 1));
}

#[test]
fn degree_two_vertex_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let witness = serde_json::json!({
        "kind": "tree", "vertices": 3, "labels": [0, 2],
        "edges": [{"u": 0, "v": 1, "weight": "1"}, {"u": 1, "v": 2, "weight": "1"}]
    });
    let path = write_witness(dir.path(), witness);
    let input = dir.path().join("pair.json");
    std::fs::write(
        &input,
        r#"{"n": 2, "variant": "tree-general-closed", "intervals": [{"i": 1, "j": 2, "lo": "2", "hi": "2"}]}"#,
    )
    .unwrap();
    let out = run(&["verify", "--input", path_str(&input), "--witness", path_str(&path)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree 2"));
}

#[test]
fn crosscheck_tree_agrees() {
    let out = run(&["crosscheck", "--n", "4", "--variant", "tree-general-open", "--seeds", "50"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["agreed"], 50);
    assert_eq!(doc["disagreements"], serde_json::json!([]));
}

#[test]
fn crosscheck_graph_agrees() {
    let out = run(&["crosscheck", "--n", "4", "--variant", "graph-closed", "--seeds", "50"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["agreed"], 50);
}

#[test]
fn crosscheck_star_agrees() {
    let out = run(&["crosscheck", "--n", "5", "--variant", "star-open", "--seeds", "30"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn crosscheck_beyond_oracle_limit() {
    let out = run(&["crosscheck", "--n", "9", "--variant", "tree-general-open"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(code(&run(&["crosscheck", "--n", "4", "--variant", "forest"])), 2);
    assert_eq!(code(&run(&["decide"])), 2);
}
