//! Versioned expected-count tables.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliResult, Failure};
use crate::io::FileRecord;
use crate::manifest::Counters;
use crate::stats::StatsRecord;

pub const SUPPORTED_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectationFile {
    pub version: u32,
    #[serde(default)]
    pub stages: BTreeMap<String, StageExpectation>,
    #[serde(default)]
    pub datasets: BTreeMap<String, DatasetExpectation>,
    #[serde(default)]
    pub tables: BTreeMap<String, StatsRecord>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageExpectation {
    #[serde(default)]
    pub note: Option<String>,
    #[serde(default)]
    pub counts: BTreeMap<String, u64>,
    /// Counts that only apply when an input stream is known complete.
    #[serde(default)]
    pub complete_input: Option<CompleteInput>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompleteInput {
    pub role: String,
    pub lines: u64,
    pub counts: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetExpectation {
    #[serde(default)]
    pub note: Option<String>,
    #[serde(default)]
    pub filter: Option<String>,
    pub count: u64,
}

impl ExpectationFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        let file: ExpectationFile = serde_json::from_str(&text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        if file.version != SUPPORTED_VERSION {
            return Err(Failure::Usage(format!(
                "{}: unsupported version {} (expected {SUPPORTED_VERSION})",
                path.display(),
                file.version
            )));
        }
        Ok(file)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Ok,
    Mismatch,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub counter: String,
    pub expected: u64,
    pub actual: Option<u64>,
    pub status: CheckStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectationReport {
    pub source: String,
    pub key: String,
    pub checks: Vec<Check>,
}

impl ExpectationReport {
    pub fn mismatches(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Mismatch)
            .collect()
    }

    pub fn summary(&self) -> String {
        self.mismatches()
            .iter()
            .map(|c| match c.actual {
                Some(a) => format!("{}: expected {}, got {a}", c.counter, c.expected),
                None => format!("{}: expected {}, not reported", c.counter, c.expected),
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn check(counter: &str, expected: u64, counters: &Counters) -> Check {
    let actual = counters.get(counter);
    Check {
        counter: counter.to_string(),
        expected,
        actual,
        status: if actual == Some(expected) {
            CheckStatus::Ok
        } else {
            CheckStatus::Mismatch
        },
    }
}

/// Compares stage counters against `exp`. Completeness-gated counts are
/// skipped unless the named input has exactly the configured line count.
pub fn check_stage(
    exp: &StageExpectation,
    counters: &Counters,
    inputs: &[FileRecord],
) -> Vec<Check> {
    let mut out: Vec<Check> = exp
        .counts
        .iter()
        .map(|(k, v)| check(k, *v, counters))
        .collect();
    if let Some(gate) = &exp.complete_input {
        let complete = inputs
            .iter()
            .any(|r| r.role == gate.role && r.lines == gate.lines);
        for (k, v) in &gate.counts {
            if complete {
                out.push(check(k, *v, counters));
            } else {
                out.push(Check {
                    counter: k.clone(),
                    expected: *v,
                    actual: counters.get(k),
                    status: CheckStatus::Skipped,
                });
            }
        }
    }
    out
}
