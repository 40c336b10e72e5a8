use std::path::Path;
use std::process::{Command, Output};

use qgrowth::models::logistic_solution;

fn qgrowth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgrowth")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV with one header line, skipping `#` comments.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_verhulst_matches_logistic() {
    let out = stdout(&qgrowth(&["simulate", "Verhulst", "r=1", "p0=0.001", "--t-stop", "10", "--t-count", "201"]));
    let rows = rows(&out);
    assert_eq!(rows.len(), 201);
    for r in &rows {
        let t: f64 = r[0].parse().unwrap();
        let p: f64 = r[1].parse().unwrap();
        assert!((p - logistic_solution(1.0, 0.001, t).value).abs() < 1e-12, "t={t}");
        assert_eq!(r[3], "ok");
    }
    assert_eq!(rows[200][0].parse::<f64>().unwrap(), 10.0);
}

#[test]
fn simulate_schaefer_and_constant_malthus() {
    let out = stdout(&qgrowth(&[
        "simulate", "RichardsSchaefer", "q=2", "epsilon=-0.1", "kappa=1", "p0=0.001", "--times", "0,50",
    ]));
    let p: f64 = rows(&out)[1][1].parse().unwrap();
    assert!((p - 0.8f64.sqrt()).abs() < 1e-6);

    let out = stdout(&qgrowth(&["simulate", "--model", "Malthus", "--param", "r=0", "--param", "p0=0.3"]));
    assert!(rows(&out).iter().all(|r| r[1].parse::<f64>().unwrap() == 0.3));
}

#[test]
fn simulate_is_deterministic() {
    let args = ["simulate", "TsoularisWallace", "qprime=0.9", "q=1", "gamma=0.5", "kappa=1", "p0=0.001"];
    assert_eq!(qgrowth(&args).stdout, qgrowth(&args).stdout);
    let ode = ["simulate", "Blumberg", "qprime=-0.5", "gamma=1.5", "kappa=1", "p0=0.01"];
    assert_eq!(qgrowth(&ode).stdout, qgrowth(&ode).stdout);
}

#[test]
fn header_comment_can_be_dropped() {
    let with = stdout(&qgrowth(&["simulate", "Gompertz", "kappa=1"]));
    assert!(with.starts_with("# qgrowth simulate model=Gompertz"));
    let without = stdout(&qgrowth(&["simulate", "Gompertz", "kappa=1", "--no-header-comment"]));
    assert!(without.starts_with("t,p,method,flag\n"));
}

#[test]
fn simulate_json_envelope() {
    let out = stdout(&qgrowth(&["simulate", "Richards", "q=0.5", "kappa=1", "--t-count", "5", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["model"], "Richards");
    assert_eq!(v["params"]["q"], 0.5);
    assert_eq!(v["data"]["method"], "analytic");
    assert_eq!(v["data"]["trajectory"].as_array().unwrap().len(), 5);
}

#[test]
fn invalid_parameters_exit_2() {
    let out = qgrowth(&["simulate", "Verhulst", "r=1", "p0=-1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("p0") && err.contains("positive"), "{err}");

    let out = qgrowth(&["simulate", "Gompertz", "q=1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qgrowth(&["simulate", "NoSuchModel"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fit_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("obs.csv");
    stdout(&qgrowth(&[
        "simulate", "Verhulst", "kappa=0.9", "p0=0.02", "--t-count", "40", "--output", path_str(&data),
    ]));
    let report = dir.path().join("fit.json");
    stdout(&qgrowth(&[
        "fit", "--input", path_str(&data), "--model", "Verhulst", "--free", "kappa,p0", "--output", path_str(&report),
    ]));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let kappa = v["data"]["free_values"]["kappa"].as_f64().unwrap();
    let p0 = v["data"]["free_values"]["p0"].as_f64().unwrap();
    assert!((kappa / 0.9 - 1.0).abs() < 1e-6, "kappa {kappa}");
    assert!((p0 / 0.02 - 1.0).abs() < 1e-6, "p0 {p0}");
    assert_eq!(v["data"]["converged"], true);
    assert_eq!(v["data"]["n_obs"], 40);

    let fitted = std::fs::read_to_string(dir.path().join("fit.fitted.csv")).unwrap();
    assert_eq!(rows(&fitted).len(), 40);
}

#[test]
fn fit_raw_counts_need_capacity() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("counts.csv");
    std::fs::write(&data, "t,n\n0,10\n1,25\n2,60\n3,130\n4,250\n").unwrap();
    let out = qgrowth(&["fit", "--input", path_str(&data), "--model", "Verhulst"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n-inf"));

    let out = qgrowth(&["fit", "--input", path_str(&data), "--model", "Verhulst", "--n-inf", "1000"]);
    assert!(matches!(out.status.code(), Some(0) | Some(3)));
}

#[test]
fn fit_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("bad.csv");
    std::fs::write(&data, "t,value\n0,0.1\n1,0.2\n2,0.3\n").unwrap();
    let out = qgrowth(&["fit", "--input", path_str(&data), "--model", "Verhulst"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column 'p'"));

    std::fs::write(&data, "t,p\n0,0.1\n1,0.2\n2,0.3\n").unwrap();
    let out = qgrowth(&["fit", "--input", path_str(&data), "--model", "Verhulst", "--free", "gamma"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("'gamma' is not a parameter"));
}

#[test]
fn table_lists_named_rows() {
    let text = stdout(&qgrowth(&["table"]));
    assert!(text.contains("1+q̃(1−γ)"));
    let csv = stdout(&qgrowth(&["table", "--format", "csv"]));
    assert_eq!(rows(&csv).len(), 13);
    let svb = rows(&csv).into_iter().find(|r| r[1] == "Specialized von Bertalanffy").unwrap();
    assert_eq!(svb[3], "1/3");
    assert_eq!(rows(&stdout(&qgrowth(&["table", "--format", "csv", "--all"]))).len(), 15);

    let json = stdout(&qgrowth(&["table", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 13);
    assert_eq!(json, stdout(&qgrowth(&["table", "--format", "json"])));
}

#[test]
fn check_passes_at_defaults() {
    let out = qgrowth(&["check"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(rows(&stdout(&out)).iter().all(|r| r[4] == "pass"));
}

#[test]
fn check_reports_loose_tolerances() {
    let out = qgrowth(&["check", "--rel-tol", "1e-2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["data"].to_string().contains("fail"));

    let out = stdout(&qgrowth(&["check", "--model", "Richards"]));
    let rows = rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "Richards");
}
