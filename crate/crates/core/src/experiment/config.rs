use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chain::CouplingScheme;
use crate::embedding::TraceScheme;
use crate::error::{Error, Result};
use crate::generation::WeightScheme;
use crate::matrix::Tolerance;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Chain,
    Generate,
    Diagonal,
    Embed,
    #[default]
    All,
}

impl Suite {
    /// The concrete suites this selection runs, in execution order.
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Chain, Suite::Generate, Suite::Diagonal, Suite::Embed],
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Chain => "chain",
            Suite::Generate => "generate",
            Suite::Diagonal => "diagonal",
            Suite::Embed => "embed",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "both" => Ok(Format::Both),
            _ => Err(Error::Config {
                field: "format".into(),
                reason: format!("expected json, csv or both, got {s:?}"),
            }),
        }
    }
}

/// Parameters of one run. Unset fields in a config file take these defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub subcommand: Suite,
    pub m_max: usize,
    pub n_max: usize,
    pub f_cap: usize,
    pub s_max: usize,
    pub r_max: usize,
    pub trials: usize,
    /// Exact multiplicativity trials in the embedding suite.
    pub rational_trials: usize,
    pub coupling_scheme: String,
    pub weight_scheme: String,
    pub trace_scheme: TraceScheme,
    pub seed: u64,
    pub tol: f64,
    /// Not echoed into the report, so runs differing only in output location agree.
    #[serde(skip_serializing)]
    pub out_dir: PathBuf,
    pub format: Format,
    pub parallel: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            subcommand: Suite::All,
            m_max: 10,
            n_max: 10,
            f_cap: 512,
            s_max: 8,
            r_max: 40,
            trials: 100,
            rational_trials: 25,
            coupling_scheme: "linear".into(),
            weight_scheme: "default".into(),
            trace_scheme: TraceScheme::Geometric,
            seed: 7,
            tol: 1e-9,
            out_dir: PathBuf::from("opalg-out"),
            format: Format::Both,
            parallel: false,
        }
    }
}

fn config_err(field: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        field: field.into(),
        reason: reason.into(),
    }
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| config_err("config", e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Checks every field, naming the first offending one.
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("m_max", self.m_max),
            ("n_max", self.n_max),
            ("f_cap", self.f_cap),
            ("s_max", self.s_max),
            ("r_max", self.r_max),
            ("trials", self.trials),
            ("rational_trials", self.rational_trials),
        ];
        for (field, v) in counts {
            if v == 0 {
                return Err(config_err(field, "must be positive"));
            }
        }
        if self.r_max < 2 {
            return Err(config_err("r_max", "must be at least 2"));
        }
        if u32::try_from(self.r_max).is_err() {
            return Err(config_err("r_max", "too large"));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(config_err("tol", "must be a finite nonnegative number"));
        }
        self.coupling()?;
        self.weights()?;
        Ok(())
    }

    pub fn tolerance(&self) -> Result<Tolerance> {
        Tolerance::from_abs(self.tol).map_err(|e| config_err("tol", e.to_string()))
    }

    pub fn coupling(&self) -> Result<CouplingScheme> {
        CouplingScheme::parse(&self.coupling_scheme)
            .map_err(|e| config_err("coupling_scheme", e.to_string()))
    }

    pub fn weights(&self) -> Result<WeightScheme> {
        WeightScheme::parse(&self.weight_scheme)
            .map_err(|e| config_err("weight_scheme", e.to_string()))
    }
}
