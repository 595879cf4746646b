//! Structured results for the verification suites.
//!
//! A report is a flat list of checks, each carrying a stable claim id, the
//! location string of the statement it verifies, a pass/fail/skipped status,
//! and one numeric witness (a residual or a count). The text rendering is one
//! line per check and contains nothing else, so two runs with equal inputs
//! produce byte-identical text; the JSON rendering additionally carries the
//! wall-clock `runtime_ms`, which varies between runs.

use serde::{Deserialize, Serialize};

/// Verdict of a single check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// The numeric evidence a check reports: an integer count or a real residual.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Count(i64),
    Residual(f64),
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::Count(n) => write!(f, "{n}"),
            Witness::Residual(r) => write!(f, "{r:.3e}"),
        }
    }
}

/// One verified claim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub claim_id: String,
    pub paper_location: String,
    pub status: CheckStatus,
    pub witness: Witness,
}

/// A full suite run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub tol: f64,
    pub checks: Vec<Check>,
    pub runtime_ms: u64,
}

impl VerificationReport {
    /// Empty report for a suite.
    pub fn new(suite: &str, seed: u64, tol: f64) -> Self {
        Self {
            suite: suite.to_string(),
            seed,
            tol,
            checks: Vec::new(),
            runtime_ms: 0,
        }
    }

    /// Appends one check with a pass/fail verdict.
    pub fn push(&mut self, claim_id: &str, paper_location: &str, pass: bool, witness: Witness) {
        self.checks.push(Check {
            claim_id: claim_id.to_string(),
            paper_location: paper_location.to_string(),
            status: if pass {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            witness,
        });
    }

    /// Appends the checks of another report.
    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    /// True iff no check failed (skipped checks do not fail a suite).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    /// Claim ids of failing checks, in report order.
    pub fn failing_ids(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .map(|c| c.claim_id.as_str())
            .collect()
    }

    /// Text rendering: exactly one `[PASS|FAIL|SKIP] claim location witness`
    /// line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for check in &self.checks {
            let tag = match check.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "SKIP",
            };
            out.push_str(&format!(
                "[{tag}] {} {} {}\n",
                check.claim_id, check.paper_location, check.witness
            ));
        }
        out
    }

    /// Pretty JSON rendering of the whole report.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
