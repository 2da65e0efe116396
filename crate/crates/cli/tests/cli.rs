//! The binary end to end: configs, exit codes and the files it leaves.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lefschetz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lefschetz")).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn passing_run_exits_zero_and_audits_clean() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), "rr.json", r#"{"degrees": [9, 25], "trials": 2000}"#);
    let out = tmp.path().join("rr");
    let o = lefschetz(&["real-roots", "--config", &config, "--seed", "5", "--workers", "2", "--out", out.to_str().unwrap()]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{stdout}{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout.contains("PASS sqrt-law d=25"), "{stdout}");
    for f in ["trials.csv", "discards.csv", "summary.json", "summary.svg"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["master_seed"], 5);
    assert_eq!(summary["workers"], 2);
    let a = lefschetz(&["audit", out.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
}

#[test]
fn failed_calibration_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), "g.json", r#"{"degrees": [3, 4, 5, 6], "trials": 3}"#);
    let out = tmp.path().join("g");
    let o = lefschetz(&["growth-sweep", "--config", &config, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(out.join("summary.svg").exists());
}

#[test]
fn excess_discards_exit_three() {
    let tmp = tempfile::tempdir().unwrap();
    // Sixty roots crowd the plane: ten bumps with clear boundaries rarely fit.
    let config = write_config(
        tmp.path(),
        "pm.json",
        r#"{"degrees": [60], "trials": 4, "resolutions": [64], "bumps_per_trial": 10}"#,
    );
    let out = tmp.path().join("pm");
    let o = lefschetz(&["pm-check", "--config", &config, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stdout));
    let discards = fs::read_to_string(out.join("discards.csv")).unwrap();
    assert!(discards.lines().count() > 1);
    // Every discarded section is kept for replay.
    assert!(out.join("sections").join("d60_t0.json").exists());
}

#[test]
fn bad_configs_exit_one_with_a_message() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), "bad.json", r#"{"kind": "equi", "trials": 3}"#);
    let o = lefschetz(&["real-roots", "--config", &config]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("equi"));
    let config = write_config(tmp.path(), "syntax.json", "{\n \"trials\": 3,,\n}");
    let o = lefschetz(&["real-roots", "--config", &config]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:"));
}

#[test]
fn replay_prints_a_topology_fragment() {
    let tmp = tempfile::tempdir().unwrap();
    let circle = r#"{"space": "CP2", "degree": 2, "coeffs": [
        {"alpha": [2, 0, 0], "re": 1.0, "im": 0.0},
        {"alpha": [0, 2, 0], "re": 1.0, "im": 0.0},
        {"alpha": [0, 0, 2], "re": -1.0, "im": 0.0}]}"#;
    let path = write_config(tmp.path(), "circle.json", circle);
    let o = lefschetz(&["replay", &path, "--analysis", "topology"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["topology"]["component_count"], 1);
}
