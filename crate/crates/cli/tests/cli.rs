use std::path::Path;
use std::process::{Command, Output};

fn dunkl(args: &[&str], config: &str, dir: &Path) -> Output {
    let path = dir.join("config.json");
    std::fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_dunkl"))
        .args(args)
        .arg("--config")
        .arg(&path)
        .output()
        .expect("binary runs")
}

fn report(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn poly_suite_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let cfg = r#"{"seed": 11, "poly": {"samples": 6, "max_degree": 5, "intertwiner_degree": 5}}"#;
    let o = dunkl(&["verify", "poly", "--out", out.to_str().unwrap()], cfg, dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    assert_eq!(r["suite"], "poly");
    assert_eq!(r["pass"], true);
    let checks = r["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    let ids: Vec<&str> = checks.iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"seed": 5, "poly": {"samples": 4, "max_degree": 4, "intertwiner_degree": 4}}"#;
    let a = dunkl(&["verify", "poly"], cfg, dir.path());
    let b = dunkl(&["verify", "poly"], cfg, dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn configured_report_path_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("configured.json");
    let cfg = format!(
        r#"{{"seed": 2, "poly": {{"samples": 2, "max_degree": 3, "intertwiner_degree": 3}},
            "output": {{"report": {:?}}}}}"#,
        out.to_str().unwrap()
    );
    let o = dunkl(&["verify", "poly"], &cfg, dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(report(&out)["pass"], true);
}

#[test]
fn classical_riesz_case_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("riesz.json");
    let cfg = r#"{"seed": 1, "riesz": {"cases": [{"n": 1, "k": "0"}], "z_samples": 4}}"#;
    let o = dunkl(&["verify", "riesz", "--out", out.to_str().unwrap()], cfg, dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    let classical = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "riesz.classical.family[n=1:k=0]")
        .expect("classical check present");
    assert_eq!(classical["pass"], true);
    assert_eq!(classical["tolerance"], 1e-6);
}

#[test]
fn low_resolution_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"seed": 1, "transform": {"grid": {"half_width": 12, "n": 8}}}"#;
    let o = dunkl(&["verify", "transform"], cfg, dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("minimum"));
}

#[test]
fn missing_seed_and_unknown_suite_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(dunkl(&["verify", "poly"], "{}", dir.path()).status.code(), Some(2));
    let o = dunkl(&["verify", "nonsense"], r#"{"seed": 1}"#, dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flags_override_top_level_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"seed": 1}"#;
    let o = dunkl(
        &[
            "verify",
            "poly",
            "--seed",
            "42",
            "--set",
            r#"poly={"samples": 2, "max_degree": 3, "intertwiner_degree": 3}"#,
        ],
        cfg,
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["seed"], 42);
    let bad = dunkl(&["verify", "poly", "--set", "bogus=1"], cfg, dir.path());
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn kernel_truncation_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table.csv");
    let cfg = r#"{"seed": 1, "root_system": {"name": "rank1", "k_by_orbit": ["1"]}}"#;
    let o = dunkl(&["table", "kernel_truncation", "--out", out.to_str().unwrap()], cfg, dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("param,value_re,value_im,error,bound,ok"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        let (err, bound): (f64, f64) = (r[3].parse().unwrap(), r[4].parse().unwrap());
        assert!(err <= bound);
        assert_eq!(r[5], "true");
    }
}

#[test]
fn unknown_table_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = dunkl(&["table", "nope"], r#"{"seed": 1}"#, dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_kernel_matches_rank_one_closed_form() {
    // k = 0: E(λ, x) = e^{λx}
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"seed": 1, "root_system": {"name": "rank1", "k_by_orbit": ["0"]},
                  "eval": {"lambda": [[0.5, 1.0]]}}"#;
    let o = dunkl(&["eval", "kernel", "--point", "-1.5"], cfg, dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let (re, im) = (v["value"][0].as_f64().unwrap(), v["value"][1].as_f64().unwrap());
    let (a, b) = (-0.75f64, -1.5f64);
    assert!((re - a.exp() * b.cos()).abs() < 1e-12);
    assert!((im - a.exp() * b.sin()).abs() < 1e-12);
}

#[test]
fn eval_transform_of_gaussian() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"seed": 1, "root_system": {"name": "rank1", "k_by_orbit": ["1"]}}"#;
    let o = dunkl(&["eval", "transform", "--point", "0.5"], cfg, dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let re = v["value"][0].as_f64().unwrap();
    assert!((re - (-0.125f64).exp()).abs() < 1e-8);
    let bad = dunkl(&["eval", "transform", "--point", "0.5,1"], cfg, dir.path());
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn bad_thread_count_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, r#"{"seed": 1}"#).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_dunkl"))
        .args(["verify", "poly", "--config"])
        .arg(&path)
        .env("DUNKL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
