//! Exit codes, report formats and determinism of the command-line driver.

use std::process::{Command, Output};

use serde_json::Value;

fn q4s(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_q4s"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("Q4S_THREADS", t);
    }
    cmd.output().expect("run q4s")
}

fn records(out: &Output) -> Vec<Value> {
    let v: Value = serde_json::from_slice(&out.stdout).expect("json report");
    assert_eq!(v["schema"], 1);
    v["records"].as_array().unwrap().clone()
}

#[test]
fn pairing_reports_one() {
    let out = q4s(&["pairing", "--q", "0.5"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    let simple = recs.iter().find(|r| r["check_id"] == "simple").unwrap();
    assert!((simple["value"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert_eq!(simple["pass"], true);
    for key in ["suite", "check_id", "paper_anchor", "q", "cutoff", "value", "expected", "residual", "tolerance", "pass"] {
        assert!(simple.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn tail_budget_is_a_configuration_error() {
    let out = q4s(&["all", "--q", "0.97", "--cutoff", "5/2"], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tail bound"));
    assert!(out.stdout.is_empty());
}

#[test]
fn configuration_errors_exit_one() {
    for args in [
        &["zeta", "--suite", "spectral"][..],
        &["pairing", "--suite", "zeta"],
        &["pairing", "--cutoff", "5/2"],
        &["pairing", "--cutoff", "twelve"],
        &["pairing", "--q", "1.5"],
        &["pairing", "--tol", "0"],
        &["bogus"],
    ] {
        assert_eq!(q4s(args, None).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(q4s(&["pairing"], Some("many")).status.code(), Some(1));
}

#[test]
fn failed_checks_exit_two() {
    let out = q4s(&["idempotent", "--tol", "1e-30"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(records(&out).iter().any(|r| r["pass"] == false));
}

#[test]
fn zeta_suite_reports_residues() {
    let out = q4s(&["zeta", "--q", "0.3", "--suite", "zeta"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    let a3 = recs.iter().find(|r| r["check_id"] == "residues/one/a3").unwrap();
    assert!((a3["value"].as_f64().unwrap() - 4.0 / 3.0).abs() <= 1e-10);
    assert!(recs.iter().any(|r| r["check_id"] == "residues/lq/a1" && r["pass"] == true));
}

#[test]
fn reports_are_byte_identical_and_sorted() {
    let args = ["idempotent", "--q", "0.8", "--q", "0.3", "--format", "csv"];
    let a = q4s(&args, None);
    let b = q4s(&args, Some("1"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mut rdr = csv::Reader::from_reader(a.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(str::to_owned).collect();
    assert_eq!(header.join(","), "suite,check_id,paper_anchor,q,cutoff,value,expected,residual,tolerance,pass");
    let qs: Vec<f64> = rdr.records().map(|r| r.unwrap()[3].parse().unwrap()).collect();
    assert!(qs.windows(2).all(|w| w[0] <= w[1]) && qs[0] == 0.3);
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("q4s-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let to_file = q4s(&["pairing", "--output", path.to_str().unwrap()], None);
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), q4s(&["pairing"], None).stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
