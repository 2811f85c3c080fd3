use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::ExperimentConfig;

pub const SCHEMA_VERSION: u32 = 1;

/// One certified statement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// The identity or inequality being checked.
    pub anchor: String,
    pub expected: Value,
    pub observed: Value,
    pub bound: Option<f64>,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(
        name: impl Into<String>,
        anchor: &str,
        expected: Value,
        observed: Value,
        pass: bool,
    ) -> Self {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            expected,
            observed,
            bound: None,
            pass,
        }
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
    /// Set when the suite stopped on an error.
    pub error: Option<String>,
    /// Full certificates produced by the suite.
    pub details: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    pub index: usize,
    pub norm: f64,
    pub lower_bound: f64,
    pub expected: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub m: usize,
    pub r: u32,
    pub residual: f64,
    pub bound: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub trial: usize,
    pub l1_norm: f64,
    pub sup_norm: f64,
    pub ratio: f64,
    pub trace_norm: f64,
}

/// Plot-ready series, also written as CSV.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub norm_profile: Vec<NormRow>,
    pub generation_residuals: Vec<ResidualRow>,
    pub embedding_ratios: Vec<RatioRow>,
}

/// Deterministic result of a run: identical configs give identical reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub suites: Vec<SuiteReport>,
    pub series: Series,
    pub pass: bool,
}

impl RunReport {
    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn checks(&self) -> impl Iterator<Item = &CheckRecord> {
        self.suites.iter().flat_map(|s| s.checks.iter())
    }
}

/// Wall-clock data, kept apart from the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub started_unix_ms: u128,
    pub stage_seconds: Vec<(String, f64)>,
    pub total_seconds: f64,
    pub crate_version: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub report: RunReport,
    pub metadata: RunMetadata,
}
