//! The JSON run document.

use std::path::PathBuf;

use leonard_trio::battery::{BatterySpec, DEFAULT_MAX_ATTEMPTS};
use leonard_trio::suites::{Mode, Suite};
use leonard_trio::{ParameterSet, Scalar};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_CONFIG: &str = include_str!("../configs/default.json");

/// One parameter set written with rational-string literals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamLiteral {
    pub q: Scalar,
    pub alpha: Scalar,
    pub beta: Scalar,
    pub delta: Scalar,
    pub s: Scalar,
    #[serde(rename = "N")]
    pub n: usize,
}

impl ParamLiteral {
    pub fn build(&self) -> leonard_trio::Result<ParameterSet> {
        ParameterSet::new(
            self.q.clone(),
            self.alpha.clone(),
            self.beta.clone(),
            self.delta.clone(),
            self.s.clone(),
            self.n,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum Parameters {
    Sets(Vec<ParamLiteral>),
    Seeded(BatterySpec),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[serde(alias = "markdown")]
    Md,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Md => "md",
        }
    }

    pub fn parse(s: &str) -> Result<Format, CliError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Md),
            other => Err(CliError::Config(format!(
                "unknown format {other:?}; expected json, csv or md"
            ))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// `"exact"` or `"float:<bits>"`.
    #[serde(default = "exact")]
    pub mode: String,
    pub parameters: Parameters,
    pub suites: Vec<Suite>,
    #[serde(default)]
    pub output: OutputSpec,
    /// Seeds the resampling of explicit sets that fail genericity.
    #[serde(default)]
    pub seed: u64,
    /// Overrides the attempt bound for both explicit and seeded parameters.
    #[serde(default)]
    pub max_attempts: Option<usize>,
    #[serde(default)]
    pub record_timings: bool,
}

fn exact() -> String {
    "exact".into()
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig, CliError> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.mode()?;
        Ok(cfg)
    }

    pub fn bundled() -> RunConfig {
        RunConfig::from_json(DEFAULT_CONFIG).expect("bundled config parses")
    }

    pub fn mode(&self) -> Result<Mode, CliError> {
        self.mode
            .parse()
            .map_err(|e: leonard_trio::Error| CliError::Config(e.to_string()))
    }

    pub fn attempts(&self) -> usize {
        match (&self.max_attempts, &self.parameters) {
            (Some(k), _) => *k,
            (None, Parameters::Seeded(spec)) => spec.max_attempts,
            (None, Parameters::Sets(_)) => DEFAULT_MAX_ATTEMPTS,
        }
    }

    /// Checks the cross-field rules the schema cannot express.
    pub fn validate(&self, mode: Mode) -> Result<(), CliError> {
        if self.suites.is_empty() {
            return Err(CliError::Config("at least one suite is required".into()));
        }
        if mode == Mode::Exact {
            if let Some(s) = self.suites.iter().find(|s| s.needs_float()) {
                return Err(CliError::Config(format!(
                    "suite {s} needs float mode (e.g. --mode float:256)"
                )));
            }
        }
        match &self.parameters {
            Parameters::Sets(sets) if sets.is_empty() => {
                Err(CliError::Config("parameter list is empty".into()))
            }
            Parameters::Seeded(spec) if spec.count == 0 => {
                Err(CliError::Config("seeded count must be positive".into()))
            }
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_config_is_valid() {
        let cfg = RunConfig::bundled();
        cfg.validate(cfg.mode().unwrap()).unwrap();
        assert_eq!(cfg.suites.len(), Suite::ALL.len());
    }

    #[test]
    fn malformed_rational_is_a_config_error() {
        let text = r#"{"parameters": {"sets": [{"q": "3/0", "alpha": "1", "beta": "1", "delta": "1", "s": "1", "N": 2}]}, "suites": ["qaskey"]}"#;
        assert!(matches!(
            RunConfig::from_json(text),
            Err(CliError::Config(_))
        ));
    }
}
