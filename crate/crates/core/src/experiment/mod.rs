//! Configuration, orchestration and report emission for certification runs.

mod config;
mod emit;
mod report;
mod suites;

use std::time::{Instant, SystemTime, UNIX_EPOCH};

pub use config::{ExperimentConfig, Format, Suite};
pub use emit::{
    emit_report, write_metadata, EMBEDDING_RATIOS_CSV, GENERATION_RESIDUALS_CSV, METADATA_JSON,
    NORM_PROFILE_CSV, REPORT_JSON,
};
pub use report::{
    CheckRecord, NormRow, RatioRow, ResidualRow, RunMetadata, RunOutcome, RunReport, Series,
    SuiteReport, SCHEMA_VERSION,
};

use crate::error::Result;

/// Runs the selected suites. A failing suite is recorded and the run goes on;
/// only an invalid configuration is an error.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let started_unix_ms = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0);
    let t0 = Instant::now();
    let mut series = Series::default();
    let mut suites_out = Vec::new();
    let mut stage_seconds = Vec::new();
    for suite in cfg.subcommand.expand() {
        let t = Instant::now();
        let out = match suite {
            Suite::Chain => suites::chain_suite(cfg, &mut series),
            Suite::Generate => suites::generate_suite(cfg, &mut series),
            Suite::Diagonal => suites::diagonal_suite(cfg),
            Suite::Embed => suites::embed_suite(cfg, &mut series),
            Suite::All => unreachable!("expanded"),
        };
        stage_seconds.push((suite.name().to_string(), t.elapsed().as_secs_f64()));
        suites_out.push(match out {
            Ok(o) => SuiteReport {
                name: suite.name().into(),
                pass: o.checks.iter().all(|c| c.pass),
                checks: o.checks,
                error: None,
                details: o.details,
            },
            Err(e) => SuiteReport {
                name: suite.name().into(),
                pass: false,
                checks: Vec::new(),
                error: Some(e.to_string()),
                details: serde_json::Value::Null,
            },
        });
    }
    let pass = suites_out.iter().all(|s| s.pass);
    Ok(RunOutcome {
        report: RunReport {
            schema_version: SCHEMA_VERSION,
            config: cfg.clone(),
            suites: suites_out,
            series,
            pass,
        },
        metadata: RunMetadata {
            started_unix_ms,
            stage_seconds,
            total_seconds: t0.elapsed().as_secs_f64(),
            crate_version: env!("CARGO_PKG_VERSION").into(),
        },
    })
}
