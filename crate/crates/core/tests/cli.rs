use std::path::Path;
use std::process::{Command, Output};

use waveguide_entanglement::scenario::read_csv;

fn wgent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wgent"))
        .args(args)
        .output()
        .expect("spawn wgent")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const ONE_ONE: &str = "scenario = one-one\ntau_end = pi/2\ntau_points = 101\nmethod = both\n";

#[test]
fn run_writes_csv_and_stdout_matches_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "a.cfg", ONE_ONE);
    let out = dir.path().join("a.csv");
    let o = wgent(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let file = std::fs::read(&out).unwrap();
    assert!(file.starts_with(b"tau,tau_over_pi,E_N,diagnostic,method\n"));
    let piped = wgent(&["run", "--config", &cfg]);
    assert_eq!(piped.stdout, file);

    let res = read_csv(&out).unwrap();
    assert_eq!(res.rows.len(), 202);
    // tau = pi/4 is grid point 50 of 101 on [0, pi/2].
    for row in &res.rows[100..102] {
        assert!((row.tau - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((row.e_n - 1.0).abs() < 1e-12);
    }
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let text =
        "scenario = one-one\nloss_ratio = 0.2\ntau_end = 2\ntau_points = 41\nmethod = both\n";
    let a = write(dir.path(), "a.cfg", text);
    let b = write(dir.path(), "b.cfg", text);
    let first = wgent(&["run", "--config", &a]);
    let second = wgent(&["run", "--config", &b]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn extrema_reports_first_maximum_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "a.cfg",
        "scenario = one-one\ntau_end = pi/2\ntau_points = 401\n",
    );
    let csv = dir.path().join("a.csv");
    assert!(
        wgent(&["run", "--config", &cfg, "--out", csv.to_str().unwrap()])
            .status
            .success()
    );
    let o = wgent(&["extrema", "--in", csv.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let first_max = v
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["kind"] == "max")
        .unwrap();
    assert!((first_max["tau"].as_f64().unwrap() - 0.4776).abs() < 1e-3);
    assert!((first_max["value"].as_f64().unwrap() - 3f64.log2()).abs() < 1e-3);
    assert_eq!(first_max["method"], "analytic");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "u.cfg", "scenario = one-one\nwavelength = 1\n");
    let o = wgent(&["run", "--config", &unknown]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("wavelength"));

    let invalid = write(dir.path(), "v.cfg", "scenario = one-one\ntau_points = 1\n");
    assert_eq!(wgent(&["run", "--config", &invalid]).status.code(), Some(2));

    let guarded = write(
        dir.path(),
        "g.cfg",
        "scenario = noon-12\nmethod = numeric\n",
    );
    assert_eq!(wgent(&["run", "--config", &guarded]).status.code(), Some(2));

    let missing = dir.path().join("missing.cfg");
    assert_eq!(
        wgent(&["run", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );

    let coarse = write(
        dir.path(),
        "c.cfg",
        "scenario = one-one\nloss_ratio = 0.3\ntau_end = 2\ntau_points = 5\nmethod = numeric\nstep = 0.5\ntrace_tolerance = 1e-12\n",
    );
    assert_eq!(wgent(&["run", "--config", &coarse]).status.code(), Some(3));

    assert_eq!(
        wgent(&["convert-loss", "--db-per-cm", "1", "--speed", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(wgent(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn presets_and_conversions() {
    let o = wgent(&["presets"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for name in ["lithium-niobate", "algaas", "silica"] {
        assert!(text.contains(name));
    }
    let o = wgent(&["convert-loss", "--db-per-cm", "0.87", "--speed", "3e10"]);
    let rate: f64 = String::from_utf8(o.stdout)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((rate - 3.0e9).abs() < 1e7);
    let o = wgent(&[
        "length-to-time",
        "--length",
        "1",
        "--index",
        "1.5",
        "--coupling",
        "1.53e11",
    ]);
    let tau: f64 = String::from_utf8(o.stdout).unwrap().trim().parse().unwrap();
    assert!((tau - 7.65).abs() < 0.01);
}
