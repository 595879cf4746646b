//! End-to-end tests of the `qeval` binary: exit codes, report formats,
//! error paths, and support-file output.

use std::process::{Command, Output};

fn qeval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qeval"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn verify_ghsz_passes_at_default_tolerance() {
    let out = qeval(&["verify-ghsz"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("[PASS] state.normalized 2.3"));
    assert!(text.contains("[PASS] enum.full_system 2.4 0"));
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn verify_ghsz_fails_under_tolerance_stress() {
    let out = qeval(&["verify-ghsz", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("[FAIL]"));
    let err = stderr_of(&out);
    assert!(err.contains("failed checks:"), "stderr: {err}");
    assert!(err.contains("state.normalized"), "stderr: {err}");
}

#[test]
fn verify_theorems_minimal_run_is_valid() {
    let out = qeval(&["verify-theorems", "--trials", "1", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 13);
    assert!(text.lines().all(|l| l.starts_with("[PASS]")));
}

#[test]
fn verify_theorems_is_deterministic_for_fixed_seed() {
    let first = qeval(&["verify-theorems", "--trials", "10", "--seed", "3"]);
    let second = qeval(&["verify-theorems", "--trials", "10", "--seed", "3"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn verify_theorems_seed_changes_the_witnesses() {
    let first = qeval(&["verify-theorems", "--trials", "10", "--seed", "3"]);
    let second = qeval(&["verify-theorems", "--trials", "10", "--seed", "4"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(second.status.code(), Some(0));
    assert_ne!(first.stdout, second.stdout);
}

#[test]
fn json_report_is_structurally_complete() {
    let out = qeval(&["verify-ghsz", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    assert_eq!(value["suite"], "verify-ghsz");
    assert_eq!(value["seed"], 0);
    assert!(value["tol"].as_f64().is_some());
    assert!(value["runtime_ms"].as_u64().is_some());
    let checks = value["checks"].as_array().expect("checks array");
    assert!(!checks.is_empty());
    for check in checks {
        assert!(check["claim_id"].as_str().is_some());
        assert!(check["paper_location"].as_str().is_some());
        assert_eq!(check["status"], "pass");
        assert!(check["witness"].is_number());
    }
}

#[test]
fn report_can_be_written_to_a_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("report.json");
    let out = qeval(&[
        "verify-ghsz",
        "--format",
        "json",
        "--out",
        path.to_str().expect("utf-8 path"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).is_empty());
    let written = std::fs::read_to_string(&path).expect("report file");
    let value: serde_json::Value = serde_json::from_str(&written).expect("valid json");
    assert_eq!(value["suite"], "verify-ghsz");
}

#[test]
fn noncommuting_plan_is_rejected_naming_the_pair() {
    let out = qeval(&["simulate", "--plan", "E_alpha,E_beta", "--n", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("E_alpha"), "stderr: {err}");
    assert!(err.contains("E_beta"), "stderr: {err}");
    assert!(err.contains("commute"), "stderr: {err}");
}

#[test]
fn unknown_observable_is_rejected() {
    let out = qeval(&["simulate", "--plan", "Q_bogus", "--n", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("Q_bogus"));
}

#[test]
fn zero_specimens_is_a_usage_error() {
    let out = qeval(&["simulate", "--plan", "F", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn single_specimen_support_prints_to_stdout() {
    let out = qeval(&["simulate", "--plan", "F", "--n", "1", "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.starts_with("#seed=9\n#n=1\n#plan=F\n"));
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().last().expect("data line").starts_with("0\tF="));
    assert!(stderr_of(&out).contains("pattern count frequency probability z"));
}

#[test]
fn support_file_round_trips_through_the_parser() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("support.txt");
    let out = qeval(&[
        "simulate",
        "--plan",
        "M,G_alpha,~F",
        "--n",
        "50",
        "--seed",
        "11",
        "--out",
        path.to_str().expect("utf-8 path"),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).starts_with("plan=M,G_alpha,~F n=50 seed=11\n"));
    let written = std::fs::read_to_string(&path).expect("support file");
    let parsed = qeval::simulator::parse_support_text(&written).expect("parses back");
    assert_eq!(parsed.seed, 11);
    assert_eq!(parsed.n, 50);
    assert_eq!(parsed.plan_names, vec!["M", "G_alpha", "~F"]);
    assert_eq!(parsed.specimens.len(), 50);
}

#[test]
fn simulate_summary_probabilities_match_the_plan() {
    let out = qeval(&[
        "simulate",
        "--plan",
        "M,G_alpha",
        "--n",
        "200",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary = stderr_of(&out);
    // Discordant patterns carry zero probability for this strongly related
    // pair, so their observed counts must be zero.
    for line in summary.lines() {
        if line.starts_with("01 ") || line.starts_with("10 ") {
            let count: u64 = line
                .split_whitespace()
                .nth(1)
                .expect("count column")
                .parse()
                .expect("integer count");
            assert_eq!(count, 0, "line: {line}");
        }
    }
}
