use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn entpath(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entpath"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn read(p: PathBuf) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn unknown_config_field_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", r#"{"random": {"n": 3, "gatez": 2}}"#);
    let o = entpath(&["simulate", "--config", cfg.to_str().unwrap()], &dir.path().join("o"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("random.gatez"));
}

#[test]
fn conjecture_needs_a_config() {
    let dir = tempfile::tempdir().unwrap();
    let o = entpath(&["conjecture"], &dir.path().join("o"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_conjecture_values_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"n": 3, "targets": {"count": 2, "r_gen": 1, "seed": 0}, "fidelity_tol": 2.0}"#,
    );
    let o = entpath(&["conjecture", "--config", cfg.to_str().unwrap()], &dir.path().join("o"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fidelity_tol"));
}

#[test]
fn zero_jobs_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = entpath(&["deutsch", "--jobs", "0"], &dir.path().join("o"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn path_cap_maps_to_resource_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.json", r#"{"random": {"n": 3, "gates": 8}, "cap": 1000}"#);
    let o = entpath(&["paths", "--config", cfg.to_str().unwrap()], &dir.path().join("o"));
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unknown_deutsch_variant() {
    let dir = tempfile::tempdir().unwrap();
    let o = entpath(&["deutsch", "--variant", "swap"], &dir.path().join("o"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = entpath(&["selftest"], &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let report: serde_json::Value = serde_json::from_str(&read(out.join("selftest.json"))).unwrap();
    assert_eq!(report["failed"], 0);
}

#[test]
fn paths_outputs_and_rerun_from_written_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "p.json", r#"{"random": {"n": 2, "gates": 3}, "seed": 4}"#);
    let first = dir.path().join("a");
    let o = entpath(&["paths", "--config", cfg.to_str().unwrap()], &first);
    assert!(o.status.success());
    assert_eq!(read(first.join("paths.csv")).lines().count(), 1 + 64);
    assert_eq!(read(first.join("residuals.csv")).lines().count(), 1 + 4);
    let report: serde_json::Value = serde_json::from_str(&read(first.join("report.json"))).unwrap();
    assert_eq!(report["pass"], true);
    let manifest: serde_json::Value = serde_json::from_str(&read(first.join("manifest.json"))).unwrap();
    assert_eq!(manifest["subcommand"], "paths");

    let second = dir.path().join("b");
    let written = first.join("config.json");
    assert!(entpath(&["paths", "--config", written.to_str().unwrap()], &second).status.success());
    let third = dir.path().join("c");
    let manifest = first.join("manifest.json");
    assert!(entpath(&["paths", "--config", manifest.to_str().unwrap()], &third).status.success());
    for f in ["paths.csv", "residuals.csv", "report.json", "circuit.json", "config.json", "manifest.json"] {
        assert_eq!(read(first.join(f)), read(second.join(f)), "{f}");
        assert_eq!(read(first.join(f)), read(third.join(f)), "{f}");
    }

    let o = entpath(&["simulate", "--config", manifest.to_str().unwrap()], &dir.path().join("d"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("subcommand"));
}

#[test]
fn file_circuit_round_trips_through_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("gen");
    assert!(entpath(&["paths", "--seed", "3"], &gen).status.success());
    let cfg = write(dir.path(), "s.json", r#"{"circuits": ["gen/circuit.json"], "initial": "000"}"#);
    let out = dir.path().join("o");
    let o = entpath(&["simulate", "--config", cfg.to_str().unwrap(), "--measure", "vonneumann", "--cut", "1"], &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(out.join("trajectories.csv"));
    assert!(csv.lines().skip(1).all(|l| l.starts_with("file-0,")));
    // three gates give four points
    assert_eq!(csv.lines().count(), 1 + 4);
    let config: serde_json::Value = serde_json::from_str(&read(out.join("config.json"))).unwrap();
    assert_eq!(config["measure"], "vonneumann");
    assert!(Path::new(config["circuits"][0].as_str().unwrap()).is_absolute());
}

#[test]
fn small_conjecture_run_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"n": 2, "targets": {"count": 3, "r_gen": 2, "seed": 1}, "r_max": 2, "samples_per_r": 2}"#,
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(entpath(&["conjecture", "--config", cfg.to_str().unwrap(), "--jobs", "1"], &a).status.success());
    assert!(entpath(&["conjecture", "--config", cfg.to_str().unwrap(), "--jobs", "3"], &b).status.success());
    for f in ["report.json", "records.csv", "config.json", "manifest.json"] {
        assert_eq!(read(a.join(f)), read(b.join(f)), "{f}");
    }
    let report: serde_json::Value = serde_json::from_str(&read(a.join("report.json"))).unwrap();
    assert_eq!(report["targets"].as_array().unwrap().len(), 3);
    assert!(report["all_targets"]["interval"].is_array());
}
