use std::process::Command;

use gup_core::cli::{run, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gup-spectra").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = call(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    out
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn spectrum_values() {
    let out = ok(&["spectrum", "--tau", "0.2", "--nmax", "2"]);
    assert!(out.starts_with("n,E_closed\n"));
    assert!((num(&rows(&out)[0][1]) - 0.552493781056045).abs() < 1e-14);

    let out = ok(&["spectrum", "--tau", "0", "--nmax", "3"]);
    for (n, r) in rows(&out).iter().enumerate() {
        assert_eq!(num(&r[1]), n as f64 + 0.5);
    }

    let out = ok(&["spectrum", "--model", "swanson", "--alpha", "15", "--beta", "0.1", "--tau", "0.5", "--nmax", "0"]);
    assert_eq!(out, "n,E_closed\n0,2.9\n");
}

#[test]
fn spectrum_with_oracle() {
    let args = ["spectrum", "--tau", "0.5", "--nmax", "3", "--oracle", "--check"];
    let out = ok(&args);
    assert!(out.starts_with("n,E_closed,E_oracle,rel_err,err_estimate\n"));
    for r in rows(&out) {
        assert!(num(&r[3]) < 1e-5);
    }
    let (code, _, _) = call(&["spectrum", "--tau", "0.5", "--nmax", "3", "--oracle", "--check", "--tol", "1e-12"]);
    assert_eq!(code, EXIT_VERIFY);
}

#[test]
fn csv_is_deterministic_and_clean() {
    let args = ["wavefunction", "--model", "pt", "--tau", "0.25", "--alpha", "1", "--beta", "0.5", "--n", "2"];
    let a = ok(&args);
    let b = ok(&args);
    assert_eq!(a, b);
    assert!(!a.contains('\r'));
    assert!(a.ends_with('\n'));
    for line in a.lines() {
        assert_eq!(line, line.trim_end());
    }
    assert_eq!(a.lines().count(), 202);
}

#[test]
fn json_envelope() {
    let out = ok(&["spectrum", "--format", "json", "--nmax", "1"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "gup-spectra/1");
    assert_eq!(v["command"], "spectrum");
    assert_eq!(v["config"]["tau"], 0.1);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["rows"][1]["n"], 1);
    for cmd in ["wavefunction", "metric", "expectation", "phase", "verify"] {
        let out = ok(&[cmd, "--format", "json", "--nmax", "0"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["command"], cmd);
        assert!(v["rows"].is_array());
    }
}

#[test]
fn wavefunction_shapes() {
    let out = ok(&["wavefunction", "--n", "1", "--points", "101"]);
    let r = rows(&out);
    assert_eq!(num(&r[50][0]), 0.0);
    assert_eq!(num(&r[50][1]), 0.0);

    let r = rows(&ok(&["wavefunction", "--n", "0", "--pmin", "0", "--pmax", "20"]));
    for w in r.windows(2) {
        assert!(num(&w[1][1]).abs() <= num(&w[0][1]).abs());
    }

    let r = rows(&ok(&["wavefunction", "--model", "pt", "--tau", "0.25", "--n", "1", "--pmin", "1e-9", "--pmax", "1"]));
    assert!(num(&r[0][1]).abs() < 1e-6);
}

#[test]
fn metric_ratio_is_constant() {
    let r = rows(&ok(&["metric", "--model", "swanson", "--rep", "pi3", "--points", "9"]));
    let first = num(&r[0][4]);
    for row in &r {
        assert!((num(&row[4]) / first - 1.0).abs() < 1e-8);
    }
}

#[test]
fn expectation_agrees_across_reps() {
    let out = ok(&["expectation", "--model", "swanson", "--nmax", "1", "--check", "--tol", "1e-6"]);
    assert_eq!(rows(&out).len(), 2 * 5 * 5);
}

#[test]
fn phase_rows() {
    let out = ok(&["phase", "--taus", "0", "--alpha-min", "0.5", "--alpha-max", "4", "--alpha-step", "0.5"]);
    assert!(out.contains("\n0,2,0.125,lower\n"));
    let out = ok(&["phase", "--taus", "0,0.5", "--check", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["meta"]["curves"][0]["branch"], "lower");
    assert_eq!(v["meta"]["point_claims"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_suites() {
    let out = ok(&["verify"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["meta"]["passed"], true);
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["case"].as_str().unwrap().contains("pi4prime f0 deformed")));
    for suite in ["commutators", "orthonormality", "invariance", "master-residual"] {
        assert!(rows.iter().any(|r| r["suite"] == suite), "{suite}");
    }
    let (code, _, _) = call(&["verify", "--suite", "orthonormality", "--model", "ho", "--wrong-branch"]);
    assert_eq!(code, EXIT_VERIFY);
}

#[test]
fn usage_errors() {
    for args in [
        vec!["spectrum", "--bogus"],
        vec!["spectrum", "--model", "quartic"],
        vec!["spectrum", "--tau", "-1"],
        vec!["spectrum", "--model", "pt", "--tau", "0"],
        vec!["phase", "--alpha-min", "3", "--alpha-max", "1"],
        vec!["spectrum", "--check"],
        vec!["nonsense"],
    ] {
        assert_eq!(call(&args).0, EXIT_USAGE, "{args:?}");
    }
}

#[test]
fn numerical_failures() {
    let (code, _, err) = call(&["spectrum", "--model", "swanson", "--alpha", "2", "--beta", "0.1", "--tau", "0.5", "--oracle"]);
    assert_eq!(code, EXIT_NUMERIC, "{err}");
    assert_eq!(call(&["wavefunction", "--tau", "0"]).0, EXIT_NUMERIC);
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# swanson run\nmodel=swanson\nalpha=15\nbeta=0.1\ntau=0.5\nnmax=0\n").unwrap();
    let path = cfg.to_str().unwrap();
    assert_eq!(ok(&["spectrum", "--config", path]), "n,E_closed\n0,2.9\n");
    let out = ok(&["spectrum", "--config", path, "--tau", "0.2", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["config"]["tau"], 0.2);
    assert_eq!(v["config"]["alpha"], 15.0);

    std::fs::write(&cfg, "model=ho\nspeed=3\n").unwrap();
    assert_eq!(call(&["spectrum", "--config", path]).0, EXIT_USAGE);
    assert_eq!(call(&["spectrum", "--config", "/nonexistent/run.cfg"]).0, EXIT_USAGE);
}

#[test]
fn binary_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spectrum.csv");
    let status = Command::new(env!("CARGO_BIN_EXE_gup-spectra"))
        .args(["spectrum", "--tau", "0", "--nmax", "1", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "n,E_closed\n0,0.5\n1,1.5\n");

    let bad = Command::new(env!("CARGO_BIN_EXE_gup-spectra")).arg("--nope").output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    let help = Command::new(env!("CARGO_BIN_EXE_gup-spectra")).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(EXIT_OK));
}
