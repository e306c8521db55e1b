//! The horolab binary: exit codes, JSON and CSV output, scenarios.

use std::io::Write;
use std::process::Command;

fn horolab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_horolab")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn json(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn c_of_rho_is_one() {
    let (code, out) = horolab(&["cfun", "eval", "--family", "SO", "--p", "1", "--q", "2", "--mu", "0"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["value"], 1.0);
    assert_eq!(v["schemaVersion"], 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(horolab(&["cfun", "eval", "--unknown-flag"]).0, 2);
    let (code, out) = horolab(&["cfun", "eval", "--family", "SO", "--p", "2", "--q", "1"]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["error"]["kind"], "usage");
}

#[test]
fn csv_table_has_documented_header() {
    let (code, out) = horolab(&["cfun", "table", "--family", "SL", "--levels", "2..5", "--mu", "1", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("level,mu,cValue"));
    let last: Vec<&str> = lines.last().unwrap().split(',').collect();
    assert_eq!(last[0], "5");
    assert!((last.last().unwrap().parse::<f64>().unwrap() - 0.2).abs() < 1e-12);
}

#[test]
fn limit_reports_sequence() {
    let (code, out) = horolab(&["cfun", "limit", "--family", "SO", "--p", "1", "--levels", "2..12", "--mu", "1"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["sequence"].as_array().unwrap().len(), 11);
    assert!((v["limitEstimate"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(v["converged"], true);
}

#[test]
fn radon_checks_pass() {
    for sub in ["dual-check", "kernel", "duality", "sphere-limit"] {
        let (code, out) = horolab(&["radon", sub, "--family", "SO", "--q", "2", "--mu", "2"]);
        assert_eq!(code, 0, "{sub}: {out}");
        assert_eq!(json(&out)["passed"], true);
    }
}

#[test]
fn scenario_runs_and_rejects_unknown_keys() {
    let mut good = tempfile::NamedTempFile::new().unwrap();
    writeln!(good, "family = \"SO\"\nlevelRange = [2, 4]\nmuCoefficients = [1]\ntruncation = 1").unwrap();
    let (code, out) = horolab(&["limits", "run", "--scenario", good.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let v = json(&out);
    assert_eq!(v["checks"].as_array().unwrap().len(), 8);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "family = \"SO\"\nlevelRange = [2, 4]\nmuCoefficients = [1]\nlevelrange = 3").unwrap();
    assert_eq!(horolab(&["limits", "run", "--scenario", bad.path().to_str().unwrap()]).0, 2);

    let mut neg = tempfile::NamedTempFile::new().unwrap();
    writeln!(neg, "family = \"SO\"\nlevelRange = [2, 4]\nmuCoefficients = [1]\n[tolerances]\nkernel = -1.0").unwrap();
    assert_eq!(horolab(&["limits", "run", "--scenario", neg.path().to_str().unwrap()]).0, 2);
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_horolab"))
        .args(["space", "info", "--family", "SL", "--n", "3"])
        .env("HOROLAB_THREADS", "two")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_horolab"))
        .args(["space", "info", "--family", "SL", "--n", "3"])
        .env("HOROLAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_single_criterion() {
    let (code, out) = horolab(&["verify-all", "--quick", "--only", "1"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["criteria"][0]["passed"], true);
}
