use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn sample(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../samples").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsquiver")).args(args).output().expect("binary runs")
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn fuchsian_sample_is_a_star() {
    let out = run(&["quiver", path(&sample("fuchsian.json")), "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert_eq!(dot.matches("[label=").count(), 4);
    let arrows: Vec<&str> = dot.lines().filter(|l| l.contains("->")).collect();
    assert_eq!(arrows.len(), 3);
    assert!(arrows.iter().all(|l| l.trim_end().ends_with("-> v_0_1;")));
    assert!(dot.contains("v_1_1_1 [label=\"[1,1,1]\\nalpha=1\""));
}

#[test]
fn order_two_sample_is_bipartite() {
    let out = run(&["quiver", path(&sample("order_two.json")), "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert_eq!(dot.matches("[label=").count(), 4);
    let arrows: Vec<&str> = dot.lines().filter(|l| l.contains("->")).collect();
    assert_eq!(arrows.len(), 4);
    assert!(arrows.iter().all(|l| l.trim_start().starts_with("v_0_") && l.contains("-> v_1_")));

    let report = stdout_json(&run(&["quiver", path(&sample("order_two.json"))]));
    assert_eq!(report["alpha"], serde_json::json!([1, 1, 1, 1]));
    assert_eq!(report["i_irr"], serde_json::json!([0, 1]));
    assert_eq!(report["lattice_ok"], Value::Bool(true));
}

#[test]
fn malformed_input_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"rank": 2, "poles": [{"point": "infinity", "order": 1}]}"#).unwrap();
    for cmd in ["quiver", "check"] {
        let out = run(&[cmd, path(&bad)]);
        assert_eq!(out.status.code(), Some(2));
        assert!(!out.stderr.is_empty());
    }
    let out = run(&["quiver", path(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_exit_codes() {
    let out = run(&["check", path(&sample("fuchsian.json"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["solvable"], Value::Bool(true));

    let out = run(&["check", path(&sample("reducible.json"))]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["certificate"]["kind"], "violating_decomposition");
    let parts = v["certificate"]["parts"].as_array().unwrap();
    let sum: Vec<i64> = (0..4).map(|k| parts.iter().map(|p| p[k].as_i64().unwrap()).sum()).collect();
    assert_eq!(sum, vec![2, 1, 1, 1]);

    let out = run(&["check", path(&sample("order_two.json")), "--max-nodes", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let a = run(&["check", path(&sample("reducible.json"))]);
    let b = run(&["check", path(&sample("reducible.json"))]);
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("verdict.json");
    let c = run(&["check", path(&sample("reducible.json")), "--output", path(&file)]);
    assert_eq!(c.status.code(), Some(1));
    assert!(c.stdout.is_empty());
    assert_eq!(fs::read(&file).unwrap(), a.stdout);
}

#[test]
fn hypergeometric_convolves_to_rank_one_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let tuple = dir.path().join("out.json");
    let pred = dir.path().join("pred.json");
    let out = run(&[
        "mc",
        path(&sample("hypergeometric_tuple.json")),
        "--instance",
        path(&sample("hypergeometric.json")),
        "--index",
        "1,1,1",
        "--output",
        path(&tuple),
        "--predicted",
        path(&pred),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["rank"], 1);
    assert_eq!(report["xi"], "-3");
    assert_eq!(report["dim_w"], report["dim_w_predicted"]);
    assert_eq!(report["alpha_check"], Value::Bool(true));
    assert!(report["orbit_check"].as_array().unwrap().iter().all(|b| *b == Value::Bool(true)));

    let v = run(&["verify", path(&tuple), "--instance", path(&pred)]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(stdout_json(&v)["all_ok"], Value::Bool(true));
}

#[test]
fn vanishing_xi_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let tuple = dir.path().join("tuple.json");
    fs::write(
        &inst,
        r#"{"rank": 1, "poles": [
            {"point": "infinity", "order": 1, "blocks": [{"size": 1, "residue": {"matrix": [["-1"]]}}]},
            {"point": "a", "order": 1, "blocks": [{"size": 1, "residue": {"matrix": [["1"]]}}]}]}"#,
    )
    .unwrap();
    fs::write(
        &tuple,
        r#"{"rank": 1, "poles": [{"point": "infinity", "coeffs": [[["-1"]]]}, {"point": "a", "coeffs": [[["1"]]]}]}"#,
    )
    .unwrap();
    let out = run(&["mc", path(&tuple), "--instance", path(&inst)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_violations() {
    let out = run(&["verify", path(&sample("hypergeometric_tuple.json")), "--instance", path(&sample("hypergeometric.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    for key in ["residue_sum_zero", "irreducible", "moment_map", "quasi_irreducible", "all_ok"] {
        assert_eq!(v[key], Value::Bool(true), "{key}");
    }

    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(sample("hypergeometric_tuple.json")).unwrap();
    let shifted = dir.path().join("shifted.json");
    fs::write(&shifted, text.replacen(r#"[[["1", "0"], ["1", "0"]]]"#, r#"[[["1", "0"], ["1", "1"]]]"#, 1)).unwrap();
    let v = stdout_json(&run(&["verify", path(&shifted), "--instance", path(&sample("hypergeometric.json"))]));
    assert_eq!(v["residue_sum_zero"], Value::Bool(false));
    assert_eq!(v["all_ok"], Value::Bool(false));

    let inst = fs::read_to_string(sample("hypergeometric.json")).unwrap();
    let perturbed = dir.path().join("perturbed.json");
    let inst = inst.replacen(
        r#"{"matrix": [["1", "0"], ["1", "0"]]}, "xi": ["0", "1"]"#,
        r#"{"matrix": [["2", "0"], ["1", "0"]]}, "xi": ["0", "2"]"#,
        1,
    );
    fs::write(&perturbed, inst).unwrap();
    let out = run(&["verify", path(&sample("hypergeometric_tuple.json")), "--instance", path(&perturbed)]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["orbits"], serde_json::json!([true, false, true]));
}

#[test]
fn shape_mismatch_exits_with_2() {
    let out = run(&["verify", path(&sample("hypergeometric_tuple.json")), "--instance", path(&sample("order_two.json"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selftest_passes_and_depends_only_on_the_seed() {
    let a = run(&["selftest", "--seed", "5", "--count", "4"]);
    assert_eq!(a.status.code(), Some(0));
    let b = run(&["selftest", "--seed", "5", "--count", "4"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["passed"], Value::Bool(true));
}
