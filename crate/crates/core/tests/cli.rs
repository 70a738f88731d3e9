use std::process::{Command, Output};

fn arw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arw")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn green_csv_on_a_line() {
    let o = arw(&["green", "--dim", "1", "--radius", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x0,h,g_row0,exit_time"));
    let rows: Vec<Vec<f64>> =
        lines.map(|l| l.split(',').map(|f| f.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 7);
    let exits: Vec<f64> = rows.iter().map(|r| r[3]).collect();
    for (got, want) in exits.iter().zip([7.0, 12.0, 15.0, 16.0, 15.0, 12.0, 7.0]) {
        assert!((got - want).abs() < 1e-9, "{exits:?}");
    }
    assert!((rows[3][2] - 4.0).abs() < 1e-9);
}

#[test]
fn green_needs_one_radius() {
    let o = arw(&["green", "--radius", "4,5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn bad_domain_values_exit_nonzero() {
    assert_eq!(arw(&["idla", "--mu", "0.8", "--radius", "5", "--trials", "3"]).status.code(), Some(1));
    assert_eq!(arw(&["stabilize", "--dim", "0", "--radius", "5"]).status.code(), Some(1));
    assert_eq!(arw(&["stabilize", "--lambda", "-1", "--radius", "5"]).status.code(), Some(1));
    assert_eq!(arw(&["stabilize", "--norm", "l3"]).status.code(), Some(1));
    assert_eq!(arw(&["--help"]).status.code(), Some(0));
}

#[test]
fn step_cap_exhaustion_has_its_own_exit_code() {
    let o = arw(&["stabilize", "--radius", "30", "--mu", "2", "--trials", "2", "--step-cap", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"dim": 1, "radius": [6, 8], "mu": 1.5, "trials": 20, "seed": 4, "format": "json"}"#)
        .unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file: serde_json::Value = serde_json::from_str(&stdout(&arw(&["idla", "--config", cfg]))).unwrap();
    let trials = from_file.as_array().unwrap();
    assert_eq!(trials.len(), 40);
    assert_eq!(trials.iter().filter(|t| t["radius"] == 6).count(), 20);

    let o = arw(&["idla", "--config", cfg, "--radius", "7", "--format", "csv"]);
    let text = stdout(&o);
    assert!(text.starts_with("radius,"));
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("7,"));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"radious": 5}"#).unwrap();
    assert_eq!(arw(&["green", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn snapshot_records_sites_and_odometer() {
    let dir = tempfile::tempdir().unwrap();
    let snap = dir.path().join("snap.json");
    let o = arw(&["stabilize", "--radius", "5", "--trials", "3", "--snapshot", snap.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&snap).unwrap()).unwrap();
    assert_eq!(v["fixated"], true);
    let sites = v["sites"].as_object().unwrap();
    assert_eq!(sites.len(), 9);
    let cell = &sites["0"];
    assert!(cell["active"].as_u64() == Some(0) && cell["burned"].is_u64());
}

#[test]
fn verify_commands_report_every_instance() {
    let o = arw(&["verify-abelian", "--radius", "4", "--trials", "25", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.to_string().contains("pass"));
    let o = arw(&["verify-monotone", "--radius", "4", "--trials", "25"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 26);
}
