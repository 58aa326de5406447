//! End-to-end checks of the `excc` binary: exit codes, artifact
//! shapes, and byte-level reproducibility of run directories.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn excc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_excc"))
}

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, json).unwrap();
    path
}

/// Every artifact in a run directory except the manifest, which
/// records wall-clock time and is the one intentionally varying file.
fn artifact_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).unwrap() {
        let entry = entry.unwrap();
        let name = entry.file_name().into_string().unwrap();
        if name == "manifest.json" {
            continue;
        }
        out.insert(name, fs::read(entry.path()).unwrap());
    }
    out
}

fn run_ok(output: &Output) {
    assert!(
        output.status.success(),
        "expected success, got {:?}\nstdout: {}\nstderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

const CROSS_LATTICE: &str = r#"{
  "experiment": "lattice",
  "body": { "kind": "cross", "d": 2 },
  "n_list": [3]
}"#;

const RANDOM_SMALL: &str = r#"{
  "experiment": "random",
  "body": { "kind": "lp", "p": 0.5, "d": 2 },
  "measure": { "kind": "torus", "d": 2 },
  "grid": { "axes": [
    { "r_min": 0.8, "r_max": 1.6, "count": 2, "phase": { "fixed": 0.3 } },
    { "r_min": 0.8, "r_max": 1.6, "count": 2, "phase": { "fixed": 1.1 } }
  ] },
  "n_list": [8],
  "samples": 20,
  "seed": 42,
  "law": { "kind": "complex_gaussian" }
}"#;

#[test]
fn lattice_run_writes_expected_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "lattice.json", CROSS_LATTICE);
    let out_dir = tmp.path().join("out");
    let output =
        excc().args(["run"]).arg(&cfg).arg("--out").arg(&out_dir).output().unwrap();
    run_ok(&output);

    let csv = fs::read_to_string(out_dir.join("lattice.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,position,j1,j2,degree,total_degree");
    // The planar cross at degree 3 carries the origin plus three
    // indices on each of the two axes.
    assert_eq!(lines.len() - 1, 7, "unexpected row count in {csv}");

    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert!(manifest["config_sha256"].is_string());
    assert!(manifest["wall_ms"].is_number());
    let names: Vec<&str> = manifest["artifacts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"lattice.csv"));
}

#[test]
fn degree_flag_overrides_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "lattice.json", CROSS_LATTICE);
    let out_dir = tmp.path().join("out");
    let output = excc()
        .args(["run"])
        .arg(&cfg)
        .args(["--n", "2"])
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    run_ok(&output);
    let csv = fs::read_to_string(out_dir.join("lattice.csv")).unwrap();
    assert_eq!(csv.lines().count() - 1, 5, "cross at degree 2 has five indices");
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["flags"]["n_list_override"], serde_json::json!([2]));
}

#[test]
fn repeated_runs_and_thread_counts_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "random.json", RANDOM_SMALL);
    let mut dirs = Vec::new();
    for (label, threads) in [("a", "8"), ("b", "1"), ("c", "8")] {
        let out_dir = tmp.path().join(label);
        let output = excc()
            .args(["run"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out_dir)
            .env("EXCC_THREADS", threads)
            .output()
            .unwrap();
        run_ok(&output);
        dirs.push(out_dir);
    }
    let reference = artifact_bytes(&dirs[0]);
    assert!(reference.contains_key("roots.csv"));
    assert!(reference.contains_key("ensemble_mean.csv"));
    for dir in &dirs[1..] {
        let other = artifact_bytes(dir);
        assert_eq!(
            reference.keys().collect::<Vec<_>>(),
            other.keys().collect::<Vec<_>>(),
            "artifact sets differ"
        );
        for (name, bytes) in &reference {
            assert_eq!(bytes, &other[name], "{name} differs between runs");
        }
    }
}

#[test]
fn validate_accepts_and_run_requires_output() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "lattice.json", CROSS_LATTICE);
    let output = excc().args(["validate"]).arg(&cfg).output().unwrap();
    run_ok(&output);
    assert!(String::from_utf8_lossy(&output.stdout).contains("ok"));

    // No `out` in the file and no `--out` flag: a validation failure.
    let output = excc().args(["run"]).arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn schema_violations_exit_with_code_2() {
    let tmp = tempfile::tempdir().unwrap();
    let unknown = write_config(
        tmp.path(),
        "unknown.json",
        r#"{ "experiment": "lattice", "body": { "kind": "cross", "d": 2 }, "n_list": [3], "shape": 7 }"#,
    );
    let output = excc().args(["validate"]).arg(&unknown).output().unwrap();
    assert_eq!(output.status.code(), Some(2), "unknown key must be rejected");

    let unsorted = write_config(
        tmp.path(),
        "unsorted.json",
        r#"{ "experiment": "lattice", "body": { "kind": "cross", "d": 2 }, "n_list": [4, 2] }"#,
    );
    let output = excc().args(["validate"]).arg(&unsorted).output().unwrap();
    assert_eq!(output.status.code(), Some(2), "degree list must increase");

    let output = excc()
        .args(["validate"])
        .arg(tmp.path().join("missing.json"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2), "missing file is a validation error");
}

#[test]
fn rank_deficient_quadrature_exits_with_code_3() {
    let tmp = tempfile::tempdir().unwrap();
    // Two quadrature nodes cannot support nine basis elements.
    fs::write(
        tmp.path().join("nodes.csv"),
        "1.0,0.0,1.0,0.0,0.5\n0.0,1.0,1.0,0.0,0.5\n",
    )
    .unwrap();
    let cfg = write_config(
        tmp.path(),
        "degenerate.json",
        r#"{
  "experiment": "extremal",
  "body": { "kind": "cross", "d": 2 },
  "measure": { "kind": "discrete", "nodes_file": "nodes.csv" },
  "grid": { "axes": [
    { "r_min": 1.5, "r_max": 1.5, "count": 1, "phase": { "fixed": 0.0 } },
    { "r_min": 1.5, "r_max": 1.5, "count": 1, "phase": { "fixed": 0.0 } }
  ] },
  "n_list": [4]
}"#,
    );
    let out_dir = tmp.path().join("out");
    let output =
        excc().args(["run"]).arg(&cfg).arg("--out").arg(&out_dir).output().unwrap();
    assert_eq!(
        output.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn plot_emission_requires_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let empty = tmp.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let output = excc().args(["plots"]).arg(&empty).output().unwrap();
    assert_eq!(output.status.code(), Some(2), "no artifacts means nothing to plot");

    let cfg = write_config(tmp.path(), "random.json", RANDOM_SMALL);
    let out_dir = tmp.path().join("out");
    run_ok(&excc().args(["run"]).arg(&cfg).arg("--out").arg(&out_dir).output().unwrap());
    let output = excc().args(["plots"]).arg(&out_dir).output().unwrap();
    run_ok(&output);
    let scripts: Vec<String> = fs::read_dir(&out_dir)
        .unwrap()
        .filter_map(|e| {
            let name = e.unwrap().file_name().into_string().unwrap();
            name.ends_with(".py").then_some(name)
        })
        .collect();
    assert!(
        scripts.len() >= 2,
        "expected field and root scripts, found {scripts:?}"
    );
}

#[test]
fn reserialized_config_still_validates() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "random.json", RANDOM_SMALL);
    let parsed: serde_json::Value =
        serde_json::from_slice(&fs::read(&cfg).unwrap()).unwrap();
    let rewritten = write_config(
        tmp.path(),
        "rewritten.json",
        &serde_json::to_string_pretty(&parsed).unwrap(),
    );
    let output = excc().args(["validate"]).arg(&rewritten).output().unwrap();
    run_ok(&output);
}

#[test]
fn invalid_thread_cap_exits_with_code_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "lattice.json", CROSS_LATTICE);
    let output = excc()
        .args(["validate"])
        .arg(&cfg)
        .env("EXCC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}
