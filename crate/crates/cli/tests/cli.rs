//! End-to-end tests of the `sphere-forcing` binary: exit codes, JSON
//! output shapes, determinism, and file side effects.

use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sphere-forcing"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn strip_survives_regular_falsification() {
    let out = run(&[
        "check",
        "--n",
        "2",
        "--coloring",
        "strip",
        "--property",
        "regular:2",
        "--radii",
        "(0.1,2.5)",
        "--seed",
        "42",
        "--budget-spheres",
        "50",
        "--budget-witnesses",
        "20",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["report"]["certificate"].is_null());
    assert_eq!(v["report"]["verdicts"].as_array().unwrap().len(), 50);
    // the resolved configuration is echoed back
    assert_eq!(v["config"]["coloring"], "strip");
    assert_eq!(v["config"]["seed"], 42);
}

#[test]
fn two_ball_cardinality_violation_exits_two() {
    let out = run(&[
        "check",
        "--n",
        "2",
        "--coloring",
        "two-ball",
        "--property",
        "cardinality:3",
        "--radii",
        "5",
        "--seed",
        "11",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    let cert = &v["report"]["certificate"];
    assert!(cert.is_object());
    assert_eq!(cert["witness"].as_array().unwrap().len(), 3);
    assert_ne!(cert["witness_color"], cert["center_color"]);
}

#[test]
fn strip_isosceles_below_unit_radius_is_violated() {
    let out = run(&[
        "check",
        "--n",
        "2",
        "--coloring",
        "strip",
        "--property",
        "isosceles:2",
        "--radii",
        "(0,1)",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_property_is_a_usage_error() {
    let out = run(&[
        "check",
        "--n",
        "2",
        "--coloring",
        "strip",
        "--property",
        "bogus:3",
        "--radii",
        "(0,1)",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_required_flag_is_a_usage_error() {
    let out = run(&["check", "--n", "2", "--coloring", "strip"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn excluded_radii_of_the_classic_triple() {
    let out = run(&["excluded-radii", "--S", "3,4,5", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let entries = stdout_json(&out);
    let entries = entries.as_array().unwrap();
    assert_eq!(entries.len(), 10);
    assert!(entries.iter().any(|e| e["exact"].as_str() == Some("5/2")));
    let values: Vec<f64> = entries
        .iter()
        .map(|e| e["value"].as_f64().unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[0] < w[1]), "sorted ascending");
}

#[test]
fn excluded_radii_rejects_long_prefixes() {
    let out = run(&["excluded-radii", "--S", "1,2,3,4,5,6,7,8,9", "--n", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("prefix too large"));
}

#[test]
fn propagation_forces_an_equidistant_center() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.json");
    fs::write(
        &points,
        r#"[
            {"coords": ["1", "0"], "color": 4},
            {"coords": ["0", "1"], "color": 4},
            {"coords": ["-1", "0"], "color": 4},
            {"coords": ["0", "0"]}
        ]"#,
    )
    .unwrap();
    let frames = dir.path().join("frames");
    let out = run(&[
        "propagate",
        "--points",
        points.to_str().unwrap(),
        "--property",
        "cardinality:3",
        "--radii",
        "1",
        "--svg-frames",
        frames.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let p = &v["propagation"];
    assert!(p["contradiction"].is_null());
    assert_eq!(p["colors"], serde_json::json!([4, 4, 4, 4]));
    let steps = p["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0]["point"], 3);
    assert_eq!(steps[0]["color"], 4);
    // one frame per round, starting from the initial state
    assert!(frames.join("round_0.svg").exists());
    assert!(frames.join("round_1.svg").exists());
}

#[test]
fn propagation_contradiction_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.json");
    fs::write(
        &points,
        r#"[
            {"coords": ["0", "0"], "color": 1},
            {"coords": ["6/5", "0"], "color": 1},
            {"coords": ["3/5", "4/5"], "color": 2}
        ]"#,
    )
    .unwrap();
    let out = run(&[
        "propagate",
        "--points",
        points.to_str().unwrap(),
        "--property",
        "cardinality:2",
        "--radii",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    let c = &v["propagation"]["contradiction"];
    assert_eq!(c["existing"], 2);
    assert_eq!(c["forced"], 1);
}

#[test]
fn plot_grid_has_sixteen_cells_and_reruns_byte_identical() {
    let args = ["plot", "--coloring", "grid:1", "--view", "0,0,4,4"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    let svg = String::from_utf8(first.stdout.clone()).unwrap();
    assert_eq!(svg.matches("<rect").count(), 16);
    assert!(svg.starts_with("<svg"));
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn plot_overlays_a_saved_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let check = run(&[
        "check",
        "--n",
        "2",
        "--coloring",
        "strip",
        "--property",
        "isosceles:2",
        "--radii",
        "(0,1)",
        "--seed",
        "7",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(check.status.code(), Some(2));
    let out = run(&[
        "plot",
        "--coloring",
        "strip",
        "--view",
        "-3,-3,3,3",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.contains("class=\"violation\""));
    assert!(svg.contains("class=\"witness\""));
    assert!(svg.contains("class=\"center\""));
}

#[test]
fn construct_chain_emits_a_full_simplex() {
    let out = run(&[
        "construct",
        "--kind",
        "chain",
        "--n",
        "2",
        "--lengths",
        "geometric:1/2",
        "--delta",
        "0.25",
        "--radius",
        "2",
        "--seed",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["outcome"], "found");
    assert_eq!(v["vertices"].as_array().unwrap().len(), 3);
    assert_eq!(v["edges"].as_array().unwrap().len(), 3);
}

#[test]
fn construct_volume_hits_its_target() {
    let out = run(&[
        "construct",
        "--kind",
        "volume",
        "--n",
        "3",
        "--m",
        "2",
        "--target",
        "1e-4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let vol = v["volume"].as_f64().unwrap();
    assert!((vol - 1e-4).abs() <= 1e-9 * 1e-4);
}

#[test]
fn same_seed_checks_are_byte_identical() {
    let args = [
        "check",
        "--n",
        "3",
        "--coloring",
        "strip",
        "--property",
        "regular:3",
        "--radii",
        "(0.5,2)",
        "--seed",
        "99",
        "--budget-spheres",
        "20",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn config_file_fills_in_unset_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(
        &cfg,
        r#"{
            "n": 2,
            "coloring": "strip",
            "property": "regular:2",
            "radii": "(0.1,2.5)",
            "seed": 1,
            "budget_spheres": 10
        }"#,
    )
    .unwrap();
    // the flag wins over the file's seed; everything else comes from the file
    let out = run(&["check", "--config", cfg.to_str().unwrap(), "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["config"]["seed"], 3);
    assert_eq!(v["config"]["budget_spheres"], 10);
    assert_eq!(v["report"]["verdicts"].as_array().unwrap().len(), 10);
}

#[test]
fn out_flag_writes_the_file_and_keeps_stdout_quiet() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "check",
        "--n",
        "2",
        "--coloring",
        "constant:0",
        "--property",
        "cardinality:2",
        "--radii",
        "1",
        "--budget-spheres",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["report"]["verdicts"].as_array().unwrap().len(), 5);
}
