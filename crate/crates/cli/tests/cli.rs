use std::process::{Command, Output};

use serde_json::Value;

fn zpfsim() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_zpfsim"));
    c.env_remove("ZPFSIM_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    zpfsim().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["no-such-command"][..],
        &[],
        &["chsh-analytic", "--eta"],
        &["uncertainty", "--mass", "muon"],
        &["uncertainty", "--mass", "pion", "--mass-kg", "1e-27"],
        &["locality"],
        &["beamsplitter", "--format", "xml"],
        &["spectrum", "--nu-max", "1e15", "--points", "0"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unknown_command_shows_help() {
    let out = run(&["frobnicate"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn domain_errors_exit_3() {
    for args in [
        &["chsh-analytic", "--eta", "1.5", "--epsilon", "0"][..],
        &["uncertainty", "--mass-kg=-1"],
        &["spectrum", "--nu-min=-5", "--nu-max", "1"],
        &["chsh-mc", "--eta", "1", "--epsilon", "1.5", "--n", "100"],
        &["oscillator", "--gamma", "5e14"],
    ] {
        assert_eq!(run(args).status.code(), Some(3), "{args:?}");
    }
}

#[test]
fn failed_runs_leave_no_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let p = path.to_str().unwrap();
    for args in [
        &["locality", "--output", p][..],
        &[
            "chsh-analytic",
            "--eta",
            "2",
            "--epsilon",
            "0",
            "--output",
            p,
        ],
        &["oscillator", "--stride", "0", "--output", p],
    ] {
        assert!(!run(args).status.success());
        assert!(!path.exists(), "{args:?}");
    }
    let traj = dir.path().join("traj.csv");
    let out = run(&[
        "oscillator",
        "--gamma",
        "1e15",
        "--trajectory",
        traj.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!traj.exists());
}

#[test]
fn chsh_analytic_reports_the_quantum_value() {
    let v = json(&run(&["chsh-analytic", "--eta", "1", "--epsilon", "0"]));
    assert!((v["S"].as_f64().unwrap() - (1.0 + 2f64.sqrt())).abs() < 1e-12);
    assert_eq!(v["violates"], true);
    assert_eq!(v["config"]["eta"], 1.0);

    let out = run(&[
        "chsh-analytic",
        "--eta",
        "0.8",
        "--epsilon",
        "0",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("eta,epsilon,S,critical_efficiency,violates")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert!(row[2].parse::<f64>().unwrap() < 2.0);
    assert_eq!(row[4], "false");
}

#[test]
fn dark_energy_for_the_pion() {
    let v = json(&run(&["dark-energy"]));
    let rho = v["rho_kg_m3"].as_f64().unwrap();
    assert!((rho - 7.4e-27).abs() / 7.4e-27 < 0.01);
    assert!((v["ratio"].as_f64().unwrap() - 0.74).abs() < 0.01);
    assert_eq!(v["config"]["mass"]["preset"], "pion");
}

#[test]
fn json_echoes_configuration() {
    let v = json(&run(&[
        "chsh-mc", "--n", "1000", "--seed", "17", "--phi-b2", "1.0",
    ]));
    assert_eq!(v["config"]["seed"], 17);
    assert_eq!(v["config"]["n_per_setting"], 1000);
    assert_eq!(v["angles"][3], 1.0);
    assert_eq!(v["detector"]["eta"], 1.0);
    assert_eq!(v["settings"].as_array().unwrap().len(), 4);

    let v = json(&run(&[
        "oscillator",
        "--mass",
        "neutron",
        "--duration",
        "1e-11",
        "--gamma",
        "2e13",
    ]));
    assert_eq!(v["config"]["mass"]["preset"], "neutron");
    assert_eq!(v["config"]["duration"], 1e-11);
    assert!(v["var_x"].as_f64().unwrap() > 0.0);
}

#[test]
fn seed_falls_back_to_environment() {
    let args = ["beamsplitter", "--n-trials", "5000"];
    let flag = zpfsim().args(args).args(["--seed", "42"]).output().unwrap();
    let env = zpfsim()
        .args(args)
        .env("ZPFSIM_SEED", "42")
        .output()
        .unwrap();
    let other = zpfsim()
        .args(args)
        .env("ZPFSIM_SEED", "43")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
    assert_ne!(flag.stdout, other.stdout);
}

#[test]
fn csv_conventions() {
    let out = run(&["chsh-scan", "--eta-points", "5", "--epsilon-points", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "eta,epsilon,chsh_value,violates");
    assert_eq!(lines.len(), 1 + 15);
    for l in &lines[1..] {
        let f: Vec<&str> = l.split(',').collect();
        assert_eq!(f.len(), 4);
        assert!(f[3] == "0" || f[3] == "1");
    }
    assert!(lines.last().unwrap().ends_with(",1"));
}

#[test]
fn every_command_runs() {
    for args in [
        &["spectrum", "--nu-max", "1e15", "--points", "5"][..],
        &[
            "sample-zpf",
            "--nu-max",
            "1e15",
            "--modes",
            "4",
            "--format",
            "csv",
        ],
        &["autocorr", "--shape", "white", "--points", "5"],
        &["uncertainty", "--mass", "neutron", "--nu", "1e12"],
        &["locality", "--mass", "neutron", "--speed", "1000"],
        &["beamsplitter", "--theta", "0,1,2", "--n-trials", "1000"],
        &["chsh-analytic", "--eta", "0.9", "--epsilon", "0.05"],
        &["chsh-scan"],
        &["chsh-mc", "--n", "1000"],
        &["lhv-check", "--models", "10"],
        &["dark-energy", "--mass", "electron"],
    ] {
        let out = run(args);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn sample_zpf_document_layout() {
    let v = json(&run(&[
        "sample-zpf",
        "--nu-max",
        "1e15",
        "--modes",
        "3",
        "--seed",
        "5",
    ]));
    assert_eq!(v["modes"].as_array().unwrap().len(), 3);
    assert_eq!(v["amplitudes"].as_array().unwrap().len(), 3);
    for key in ["nu", "k", "pol_re", "pol_im"] {
        assert!(v["modes"][0].get(key).is_some());
    }
    assert_eq!(v["config"]["nu_max"], 1e15);
}

#[test]
fn locality_examples() {
    let v = json(&run(&["locality", "--speed-fraction", "0.1"]));
    let l = v["min_distance_m"].as_f64().unwrap();
    assert!((l - 3.8616e-10).abs() / 3.8616e-10 < 1e-4);
    let out = run(&["locality", "--speed", "1", "--speed-fraction", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file_receives_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("de.json");
    let out = run(&["dark-energy", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert!(v["rho_kg_m3"].is_number());
}
