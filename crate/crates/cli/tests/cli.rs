//! Runner, report and binary behaviour.

use std::process::Command;

use relconv_cli::config::{ScenarioConfig, Suite};
use relconv_cli::suites::{run_scenario, sweep, RunOptions};

const MISSING_PARTNER: &str = r#"
name = "missing-partner"
seed = 1
suites = ["algebra", "ccp", "prop-bound"]

[algebra]
dim = 3
step = 2
constants = [[1, 2, 3, 1.0]]

[chart]
h_indices = [3]
"#;

const SMALL_SWEEP: &str = r#"
name = "small-sweep"
seed = 7
suites = ["sweep"]

[algebra]
dim = 3
step = 2
constants = [[1, 2, 3, 1.0], [2, 1, 3, -1.0]]

[chart]
h_indices = [3]

[rep]
lambda = 1.0
t_min = -8.0
t_max = 8.0
n_points = 128

[x_grid]
min = -5.0
max = 5.0
n = 24

[kernel]
family = "gaussian"
width = 1.0
amplitude = 1.0

[params]
family_size = 3
"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relconv"))
}

#[test]
fn missing_antisymmetric_partner_fails_algebra_and_skips_the_rest() {
    let cfg = ScenarioConfig::parse(MISSING_PARTNER, "test").unwrap();
    let report = run_scenario(&cfg, &RunOptions::default());
    assert!(!report.passed());
    assert_eq!(report.first_failure(), Some(Suite::Algebra));
    assert_eq!(report.exit_code(), 2);
    let skipped: Vec<Suite> = report.skipped.iter().map(|s| s.suite).collect();
    assert_eq!(skipped, vec![Suite::Ccp, Suite::PropBound]);
    assert!(report.render().contains("[algebra] antisymmetry"));
}

#[test]
fn empty_suite_list_passes_with_no_checks() {
    let mut cfg = ScenarioConfig::builtin("heisenberg-default").unwrap().unwrap();
    cfg.suites.clear();
    let report = run_scenario(&cfg, &RunOptions::default());
    assert!(report.records.is_empty());
    assert_eq!(report.exit_code(), 0);
    assert!(report.render().contains("overall: PASS (no checks)"));
}

#[test]
fn free_step2_passes_algebra_and_ccp() {
    let cfg = ScenarioConfig::builtin("free-step2").unwrap().unwrap();
    let report = run_scenario(&cfg, &RunOptions::default());
    assert!(report.passed(), "{}", report.render());
    assert!(report.records.iter().any(|r| r.suite == Suite::Ccp));
}

#[test]
fn rep_suites_are_skipped_off_heisenberg() {
    let cfg = ScenarioConfig::builtin("free-step2").unwrap().unwrap();
    let report = run_scenario(&cfg, &RunOptions::with_suites(vec![Suite::Algebra, Suite::PropBound]));
    assert!(report.passed());
    assert_eq!(report.skipped.len(), 1);
    assert_eq!(report.skipped[0].suite, Suite::PropBound);
}

#[test]
fn sweep_csv_is_deterministic() {
    let cfg = ScenarioConfig::parse(SMALL_SWEEP, "test").unwrap();
    let a = sweep(&cfg, 3);
    let b = sweep(&cfg, 3);
    assert_eq!(a.csv_string(), b.csv_string());
    assert_eq!(a.render(), b.render());
    let csv = a.csv_string();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], relconv_cli::CSV_HEADER_COMMENT);
    assert_eq!(lines[1], relconv_cli::CSV_COLUMNS);
    assert_eq!(lines.len(), 5);
    assert!(a.passed(), "{}", a.render());
}

#[test]
fn empty_family_gives_header_only_csv() {
    let cfg = ScenarioConfig::parse(SMALL_SWEEP, "test").unwrap();
    let report = sweep(&cfg, 0);
    assert_eq!(report.csv_string().lines().count(), 2);
    assert!(report.passed());
}

#[test]
fn delta_family_cannot_be_swept() {
    let text = SMALL_SWEEP.replace("family = \"gaussian\"\nwidth = 1.0\namplitude = 1.0", "family = \"delta\"");
    let cfg = ScenarioConfig::parse(&text, "test").unwrap();
    let report = sweep(&cfg, 2);
    assert_eq!(report.exit_code(), 8);
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing-partner.toml");
    std::fs::write(&bad, MISSING_PARTNER).unwrap();

    let ok = bin().args(["check-algebra"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));

    let fail = bin().args(["check-ccp", "--config", bad.to_str().unwrap()]).output().unwrap();
    assert_eq!(fail.status.code(), Some(2));

    let by_dir = bin()
        .args(["check-algebra", "--config", "missing-partner"])
        .env("RELCONV_CONFIG_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(by_dir.status.code(), Some(2));

    let unknown = bin().args(["check-algebra", "--config", "no-such-config"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(1));

    let bad_suite = bin().args(["verify", "--suite", "nope"]).output().unwrap();
    assert_eq!(bad_suite.status.code(), Some(1));
}

#[test]
fn binary_writes_csv_and_operator() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    std::fs::write(&cfg, SMALL_SWEEP).unwrap();
    let csv = dir.path().join("out.csv");
    let op = dir.path().join("op.bin");
    let out = bin()
        .args(["sweep", "--family-size", "1", "--config"])
        .arg(&cfg)
        .arg("--csv")
        .arg(&csv)
        .arg("--export-operator")
        .arg(&op)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(std::fs::metadata(&op).unwrap().len() > 0);
    assert!(!String::from_utf8_lossy(&out.stdout).contains("wall clock"));
}
