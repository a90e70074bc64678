use std::path::Path;
use std::process::Command;

use hetnet::sim::record::{read_csv, CSV_HEADER};
use hetnet::sim::{Manifest, ScenarioConfig};

fn sim() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hetnet-sim"));
    for (k, _) in std::env::vars() {
        if k.starts_with("HETNET_") {
            c.env_remove(k);
        }
    }
    c
}

fn manifest(dir: &Path) -> Manifest {
    serde_json::from_slice(&std::fs::read(dir.join("manifest.json")).unwrap()).unwrap()
}

fn default_config_path() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml")
}

#[test]
fn budget_run_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let status = sim().args(["budget", "--out"]).arg(dir.path()).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("budget.csv")).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(read_csv(&dir.path().join("budget.csv")).unwrap().len(), 18);
    let m = manifest(dir.path());
    assert_eq!(m.seed, ScenarioConfig::default().seed);
    assert_eq!(m.config_sha256, ScenarioConfig::default().hash_hex());
    assert!(m.all_passed());
}

#[test]
fn environment_overrides_flags_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let status = sim()
        .arg("scaling")
        .env("HETNET_OUT", dir.path())
        .env("HETNET_SEED", "7")
        .env("HETNET_TRIALS", "2")
        .env("HETNET_THREADS", "2")
        .status()
        .unwrap();
    assert!(matches!(status.code(), Some(0 | 2)));
    let m = manifest(dir.path());
    assert_eq!(m.seed, 7);
    assert!(read_csv(&dir.path().join("scaling.csv")).unwrap().iter().all(|r| r.trials == 2 || r.trials == 0));
    assert!(dir.path().join("scaling_decisions.json").exists());
    assert!(dir.path().join("timelines.json").exists());

    // an explicit flag beats the environment
    let status = sim()
        .args(["budget", "--seed", "9", "--out"])
        .arg(dir.path())
        .env("HETNET_SEED", "7")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert_eq!(manifest(dir.path()).seed, 9);
}

#[test]
fn shipped_config_is_the_default() {
    let cfg = ScenarioConfig::load(&default_config_path()).unwrap();
    assert_eq!(cfg, ScenarioConfig::default());
    let dir = tempfile::tempdir().unwrap();
    let status = sim().arg("budget").arg("--config").arg(default_config_path()).arg("--out").arg(dir.path()).status().unwrap();
    assert_eq!(status.code(), Some(0));
    assert_eq!(manifest(dir.path()).config_sha256, cfg.hash_hex());
}

#[test]
fn bad_config_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "schema_version = 1\n[density]\ntrails = 3\n").unwrap();
    let out = sim().arg("budget").arg("--config").arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trails"));
}

#[test]
fn failed_check_exits_with_two() {
    // with only core users there is no edge ordering to find
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("core.toml");
    std::fs::write(&cfg, "schema_version = 1\n[distance]\nfractions = [0.05]\ntrials = 10\n").unwrap();
    let status = sim().arg("distance").arg("--config").arg(&cfg).arg("--out").arg(dir.path()).status().unwrap();
    assert_eq!(status.code(), Some(2));
    assert!(!manifest(dir.path()).all_passed());
}
