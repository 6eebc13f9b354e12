//! Check results and verification reports, with JSON and text emission.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Error => "error",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub witness: Option<String>,
    pub elapsed_ms: u64,
}

/// Runs one named check. `Ok(None)` passes, `Ok(Some(w))` fails with the
/// witness, and an engine error is reported as status `error`.
pub fn run_check(name: &str, f: impl FnOnce() -> Result<Option<String>>) -> CheckResult {
    let started = Instant::now();
    let (status, witness) = match f() {
        Ok(None) => (CheckStatus::Pass, None),
        Ok(Some(w)) => (CheckStatus::Fail, Some(w)),
        Err(e) => (CheckStatus::Error, Some(e.to_string())),
    };
    CheckResult {
        name: name.to_string(),
        status,
        witness,
        elapsed_ms: started.elapsed().as_millis() as u64,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub status: CheckStatus,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, checks: Vec<CheckResult>) -> VerificationReport {
        let status = if checks.iter().any(|c| c.status == CheckStatus::Error) {
            CheckStatus::Error
        } else if checks.iter().any(|c| c.status == CheckStatus::Fail) {
            CheckStatus::Fail
        } else {
            CheckStatus::Pass
        };
        VerificationReport {
            suite: suite.into(),
            status,
            checks,
        }
    }

    /// A report for a suite that could not run at all.
    pub fn error(suite: impl Into<String>, message: impl Into<String>) -> VerificationReport {
        VerificationReport::new(
            suite,
            vec![CheckResult {
                name: "setup".to_string(),
                status: CheckStatus::Error,
                witness: Some(message.into()),
                elapsed_ms: 0,
            }],
        )
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            CheckStatus::Pass => 0,
            CheckStatus::Fail => 1,
            CheckStatus::Error => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("suite {}: {}\n", self.suite, self.status));
        for c in &self.checks {
            out.push_str(&format!(
                "  [{}] {} ({} ms)\n",
                c.status, c.name, c.elapsed_ms
            ));
            if let Some(w) = &c.witness {
                for line in w.lines() {
                    out.push_str(&format!("      {line}\n"));
                }
            }
        }
        out
    }
}

/// Joins several suite reports into one, prefixing check names with the
/// suite they came from.
pub fn merge_reports(name: &str, reports: Vec<VerificationReport>) -> VerificationReport {
    let mut checks = Vec::new();
    for r in reports {
        for mut c in r.checks {
            c.name = format!("{}/{}", r.suite, c.name);
            checks.push(c);
        }
    }
    VerificationReport::new(name, checks)
}
