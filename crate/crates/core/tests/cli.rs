use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pcpr::harness::THREADS_ENV;

fn pcpr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcpr")).args(args).env_remove(THREADS_ENV).output().unwrap()
}

fn external(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/external").join(name).display().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

const SMALL_SWEEP: &str = r#"{"kind": "gauss-sweep", "trials": 2, "gauss": {"n": 4, "m1": 4, "m2": [1, 4]}}"#;

#[test]
fn gauss_sweep_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "c.json", SMALL_SWEEP);
    let out = dir.path().join("out");
    let o = pcpr(&["gauss-sweep", "--config", &config, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["trials.csv", "summary.csv", "points.csv", "timings.csv"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 2 * 3);
}

#[test]
fn antenna_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "c.json",
        r#"{"trials": 1, "methods": ["coherent", "linear-pc"], "antenna": {"scenario": {"samples_per_set": 60, "cut_points": 37}}}"#,
    );
    let out = dir.path().join("out");
    let o = pcpr(&["antenna", "--config", &config, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["scenarios.csv", "trials.csv", "deviations.csv", "ff_cut.csv", "timings.csv"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    assert_eq!(fs::read_to_string(out.join("ff_cut.csv")).unwrap().lines().count(), 38);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out").display().to_string();
    let zero = write(dir.path(), "zero.json", r#"{"trials": 0}"#);
    assert_eq!(pcpr(&["gauss-sweep", "--config", &zero, "--out", &out]).status.code(), Some(2));
    let unknown = write(dir.path(), "unknown.json", r#"{"trails": 5}"#);
    assert_eq!(pcpr(&["gauss-sweep", "--config", &unknown, "--out", &out]).status.code(), Some(2));
    let wrong_kind = write(dir.path(), "kind.json", SMALL_SWEEP);
    assert_eq!(pcpr(&["antenna", "--config", &wrong_kind, "--out", &out]).status.code(), Some(2));
    let missing = dir.path().join("nope.json").display().to_string();
    assert_eq!(pcpr(&["gauss-sweep", "--config", &missing, "--out", &out]).status.code(), Some(2));
    let no_out = write(dir.path(), "ok.json", SMALL_SWEEP);
    assert_eq!(pcpr(&["gauss-sweep", "--config", &no_out]).status.code(), Some(2));
    assert_eq!(pcpr(&["gauss-sweep"]).status.code(), Some(2));
}

#[test]
fn solve_external_instance() {
    let o = pcpr(&[
        "solve",
        "--operator",
        &external("operator.csv"),
        "--magnitudes",
        &external("magnitudes.csv"),
        "--coherence",
        &external("coherence.json"),
        "--reference",
        &external("reference.csv"),
        "--method",
        "linear-pc",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.starts_with("index,re,im\n"));
    assert_eq!(stdout.lines().count(), 7);
    let report: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    let ec: f64 = report["epsilon_c"].as_str().unwrap().parse().unwrap();
    assert!(ec < -90.0);
}

#[test]
fn solve_writes_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("solved");
    let o = pcpr(&[
        "solve",
        "--operator",
        &external("operator.csv"),
        "--magnitudes",
        &external("magnitudes.csv"),
        "--coherence",
        &external("coherence.json"),
        "--method",
        "nonconvex-augmented",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("solution.csv").is_file());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["method"], "nonconvex-augmented");
    assert!(report["epsilon_c"].is_null());
}

#[test]
fn solve_errors() {
    let args = |method: &str, magnitudes: &str| {
        pcpr(&[
            "solve",
            "--operator",
            &external("operator.csv"),
            "--magnitudes",
            magnitudes,
            "--coherence",
            &external("coherence.json"),
            "--method",
            method,
        ])
    };
    assert_eq!(args("simplex", &external("magnitudes.csv")).status.code(), Some(2));
    assert_eq!(args("coherent", &external("magnitudes.csv")).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.csv", "index,magnitude,phase_diff\n0,1.0\n");
    let o = args("linear-pc", &bad);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.csv:2"));

    // All-zero magnitudes leave no phase reference: a numerical failure.
    let zeros: String = std::iter::once("index,magnitude,phase_diff".to_string())
        .chain((0..20).map(|k| format!("{k},0,0")))
        .collect::<Vec<_>>()
        .join("\n");
    let zeros = write(dir.path(), "zeros.csv", &zeros);
    assert_eq!(args("linear-pc", &zeros).status.code(), Some(3));
}

#[test]
fn thread_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "c.json", SMALL_SWEEP);
    let run = |threads: &str, out: &str| {
        Command::new(env!("CARGO_BIN_EXE_pcpr"))
            .args(["gauss-sweep", "--config", &config, "--out", out])
            .env(THREADS_ENV, threads)
            .output()
            .unwrap()
    };
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(run("1", a.to_str().unwrap()).status.code(), Some(0));
    assert_eq!(run("3", b.to_str().unwrap()).status.code(), Some(0));
    assert_eq!(fs::read(a.join("trials.csv")).unwrap(), fs::read(b.join("trials.csv")).unwrap());
    assert_eq!(run("zero", a.to_str().unwrap()).status.code(), Some(2));
    assert_eq!(run("0", a.to_str().unwrap()).status.code(), Some(2));
}
