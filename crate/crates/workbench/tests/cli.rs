// Copyright 2026 Pulseforge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pulseforge::artifacts::{read_run, read_sweep, read_table, read_trace, read_verify};
use tempfile::TempDir;

const DEVICE: &str = "qubit_freq_ghz = 4.972\ndrive_strength_ghz = 0.057\ndt_ns = 0.222\n";

fn pulseforge(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pulseforge"))
        .args(args)
        .current_dir(dir)
        .env_remove("PULSEFORGE_THREADS")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("device.toml"), DEVICE).unwrap();
    dir
}

fn write_spec(dir: &Path, name: &str, gate: &str, extra: &str) {
    let text = format!("device = \"device.toml\"\noutputs = \"out_{name}\"\n{extra}\n[target]\ngate = \"{gate}\"\n");
    fs::write(dir.join(format!("{name}.toml")), text).unwrap();
}

#[test]
fn train_x_writes_a_converged_run_and_its_trace() {
    let dir = workspace();
    write_spec(dir.path(), "x", "X", "");
    let out = pulseforge(&["train", "x.toml"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let record = read_run(&dir.path().join("out_x/run.json")).unwrap();
    assert!(record.infidelity <= 1e-2);
    assert!(record.timestamp.is_some());
    let trace = read_trace(&dir.path().join("out_x/trace.csv")).unwrap();
    assert_eq!(trace.len(), record.config.epochs);
    assert_eq!(trace.last().unwrap().infidelity, record.infidelity);
    let header = fs::read_to_string(dir.path().join("out_x/trace.csv")).unwrap();
    assert!(header.starts_with("epoch,infidelity\n"));

    // The trained pulse also passes verification, in both frames.
    let out = pulseforge(&["verify", "out_x/run.json"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = pulseforge(&["verify", "--lab", "out_x/run.json", "--out", "lab"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(read_verify(&dir.path().join("lab/verify.csv")).unwrap().len(), 11);
}

#[test]
fn rerun_is_identical_apart_from_the_timestamp() {
    let dir = workspace();
    write_spec(dir.path(), "h", "H", "threshold = 1.0\n[trainer]\nepochs = 15");
    let strip = |dir: &Path| {
        let mut v: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.join("out_h/run.json")).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timestamp");
        v
    };
    assert_eq!(code(&pulseforge(&["train", "h.toml"], dir.path())), 0);
    let first = strip(dir.path());
    let first_trace = fs::read(dir.path().join("out_h/trace.csv")).unwrap();
    assert_eq!(code(&pulseforge(&["train", "h.toml"], dir.path())), 0);
    assert_eq!(strip(dir.path()), first);
    assert_eq!(fs::read(dir.path().join("out_h/trace.csv")).unwrap(), first_trace);

    let out = pulseforge(&["--seed", "99", "train", "h.toml"], dir.path());
    assert_eq!(code(&out), 0);
    let reseeded = strip(dir.path());
    assert_eq!(reseeded["config"]["seed"], 99);
    assert_ne!(reseeded["infidelity"], first["infidelity"]);
}

#[test]
fn json_specs_are_accepted() {
    let dir = workspace();
    let spec =
        r#"{"outputs": "out", "threshold": 1.0, "target": {"gate": "RY", "angles": [0.5]}, "trainer": {"epochs": 3}}"#;
    fs::write(dir.path().join("spec.json"), spec).unwrap();
    let out = pulseforge(&["train", "spec.json"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let record = read_run(&dir.path().join("out/run.json")).unwrap();
    assert_eq!(record.angles, vec![0.5]);
    assert_eq!(read_trace(&dir.path().join("out/trace.csv")).unwrap().len(), 3);
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = workspace();
    write_spec(dir.path(), "cnot", "CNOT", "");
    let out = pulseforge(&["train", "cnot.toml"], dir.path());
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("registered set"), "{}", stderr(&out));
    assert!(!dir.path().join("out_cnot").exists());

    write_spec(dir.path(), "rz", "RZ", "");
    let out = pulseforge(&["train", "rz.toml"], dir.path());
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("target.angles"));

    write_spec(dir.path(), "typo", "X", "[trainer]\nepoch = 3");
    let out = pulseforge(&["train", "typo.toml"], dir.path());
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("epoch"));

    write_spec(dir.path(), "lr", "X", "[trainer]\nlearning_rate = -1.0");
    assert_eq!(code(&pulseforge(&["train", "lr.toml"], dir.path())), 1);

    assert_eq!(code(&pulseforge(&["train", "missing.toml"], dir.path())), 1);
    assert_eq!(code(&pulseforge(&["verify", "missing.json"], dir.path())), 1);
    fs::write(dir.path().join("junk.json"), "{\"gate\": 3}").unwrap();
    assert_eq!(code(&pulseforge(&["verify", "junk.json"], dir.path())), 1);
    assert_eq!(code(&pulseforge(&["frobnicate"], dir.path())), 1);

    fs::write(
        dir.path().join("bad_device.toml"),
        "qubit_freq_ghz = -1\ndrive_strength_ghz = 0.05\ndt_ns = 0.2\n",
    )
    .unwrap();
    assert_eq!(
        code(&pulseforge(
            &["sweep", "bad_device.toml", "4e9", "5e9", "11"],
            dir.path()
        )),
        1
    );
}

#[test]
fn missed_threshold_exits_with_two_but_keeps_artifacts() {
    let dir = workspace();
    write_spec(dir.path(), "sx", "SX", "threshold = 1e-15\n[trainer]\nepochs = 5");
    let out = pulseforge(&["train", "sx.toml"], dir.path());
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(stderr(&out).contains("threshold"));
    assert_eq!(read_trace(&dir.path().join("out_sx/trace.csv")).unwrap().len(), 5);

    // A barely trained SX fails the S-SX-S check with exit 2.
    let out = pulseforge(&["verify", "out_sx/run.json"], dir.path());
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(dir.path().join("out_sx/verify.csv").exists());
}

#[test]
fn verify_sx_reports_hadamard_statistics() {
    let dir = workspace();
    write_spec(dir.path(), "sx", "SX", "");
    assert_eq!(code(&pulseforge(&["train", "sx.toml"], dir.path())), 0);
    let out = pulseforge(&["verify", "out_sx/run.json"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(String::from_utf8_lossy(&out.stdout).contains("S-SX-S"));
    let rows = read_verify(&dir.path().join("out_sx/verify.csv")).unwrap();
    assert_eq!(rows.len(), 11);
    assert_eq!((rows[0].theta, rows[0].phi), (0.0, 0.0));
    assert!((rows[0].trained_p0 - 0.5).abs() <= 0.02 && (rows[0].trained_p1 - 0.5).abs() <= 0.02);
    for r in &rows {
        assert!((r.trained_p0 - r.ideal_p0).abs() <= 0.02);
    }
}

#[test]
fn sweep_locates_the_configured_resonance() {
    let dir = workspace();
    let out = pulseforge(
        &["sweep", "device.toml", "4.922e9", "5.022e9", "101", "--out", "s"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(String::from_utf8_lossy(&out.stdout).contains("4.972000 GHz"));
    let text = fs::read_to_string(dir.path().join("s/sweep.csv")).unwrap();
    assert!(text.starts_with("f_hz,excited_pop\n"));
    let points = read_sweep(&dir.path().join("s/sweep.csv")).unwrap();
    assert_eq!(points.len(), 101);
    let peak = points
        .iter()
        .max_by(|a, b| a.excited_pop.total_cmp(&b.excited_pop))
        .unwrap();
    assert!((peak.f_hz - 4.972e9).abs() <= 1e6);

    assert_eq!(
        code(&pulseforge(&["sweep", "device.toml", "5e9", "4e9", "11"], dir.path())),
        1
    );
    assert_eq!(
        code(&pulseforge(&["sweep", "device.toml", "4e9", "5e9", "2"], dir.path())),
        1
    );
}

#[test]
fn suite_writes_ten_records_and_a_table() {
    let dir = workspace();
    let out = Command::new(env!("CARGO_BIN_EXE_pulseforge"))
        .args(["suite", "device.toml", "table"])
        .current_dir(dir.path())
        .env("PULSEFORGE_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let records = read_table(&dir.path().join("table/table1.json")).unwrap();
    assert_eq!(records.len(), 10);
    assert!(records.iter().all(|r| r.infidelity <= 1e-2));
    let text = fs::read_to_string(dir.path().join("table/table1.txt")).unwrap();
    assert!(text.starts_with("Gate"));
    assert_eq!(text.lines().count(), 12);
    assert!(text.contains("3-Rot"));
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let dir = workspace();
    let out = Command::new(env!("CARGO_BIN_EXE_pulseforge"))
        .args(["sweep", "device.toml", "4.9e9", "5.0e9", "5"])
        .current_dir(dir.path())
        .env("PULSEFORGE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("PULSEFORGE_THREADS"));
}
