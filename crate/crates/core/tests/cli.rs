use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tame-measure"))
        .args(args)
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn measure_circle_emits_json() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("circle.json");
    std::fs::write(&set, r#"{"m":2,"dim":1,"disjuncts":[[{"p":"x^2+y^2-1","rel":"="}]]}"#).unwrap();
    let out = run(&["measure", "--set", path(&set), "--window", "0,0;1.5", "--samples", "2000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let value = v["value"].as_f64().unwrap();
    assert!((value - 2.0 * std::f64::consts::PI).abs() < 0.5);
    assert_eq!(v["n_samples"], 2000);
    assert_eq!(v["seed"], 42);
}

#[test]
fn measure_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("line.json");
    let csv = dir.path().join("s.csv");
    std::fs::write(&set, r#"{"m":2,"dim":1,"disjuncts":[[{"p":"y","rel":"="}]]}"#).unwrap();
    let out = run(&[
        "measure", "--set", path(&set), "--window", "0,0;1", "--samples", "150", "--csv", path(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("sample_index,projection_hash,offset,count,degenerate_flag"));
    assert_eq!(lines.count(), 150);
}

#[test]
fn length_of_parabola() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("c.json");
    std::fs::write(&curve, r#"{"coords":["t","t^2"]}"#).unwrap();
    let out = run(&["length", "--curve", path(&curve), "--samples", "4000", "--workers", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["value"].as_f64().unwrap() - 1.4789).abs() < 0.05);
}

#[test]
fn bad_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let missing = dir.path().join("missing.json");
    for args in [
        vec!["measure", "--set", path(&bad), "--window", "0,0;1", "--samples", "500"],
        vec!["measure", "--set", path(&missing), "--window", "0,0;1", "--samples", "500"],
        vec!["bound", "optm", "m=2", "q=3"],
        vec!["bound", "nope", "m=2"],
        vec!["verify", "--scenario", "no-such-scenario"],
        vec!["verify", "--scenario", "circle", "--workers", "0"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }

    let ok = dir.path().join("ok.json");
    std::fs::write(&ok, r#"{"m":2,"dim":1,"disjuncts":[[{"p":"y","rel":"="}]]}"#).unwrap();
    for window in ["0,0", "0,0;-1", "0,0,0;1"] {
        let out = run(&["measure", "--set", path(&ok), "--window", window, "--samples", "500"]);
        assert_eq!(out.status.code(), Some(2), "{window}");
    }
    let few = run(&["measure", "--set", path(&ok), "--window", "0,0;1", "--samples", "10"]);
    assert_eq!(few.status.code(), Some(2));
}

#[test]
fn bound_values() {
    let out = run(&["bound", "optm", "m=2", "d=3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"], 10.0);
    assert_eq!(v["kind"], "optm");

    let out = run(&["bound", "khovanskii", "m=3", "q=45"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["value"].is_null());
    assert!(v["caveats"].as_array().unwrap().iter().any(|c| c == "log-space-only"));
}

#[test]
fn verify_bounds_table_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = run(&["verify", "--scenario", "bounds-table", "--json", path(&report)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v.get("wall_clock_seconds").is_none());
}

#[test]
fn verify_writes_one_csv_per_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curves.csv");
    let out = run(&[
        "verify", "--scenario", "parametric-curve", "--samples", "500", "--csv", path(&csv), "--timing",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["wall_clock_seconds"].as_f64().unwrap() >= 0.0);
    let written: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(written.len(), 2);
}
