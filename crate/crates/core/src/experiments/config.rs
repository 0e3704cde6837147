use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::target::TargetSpec;
use crate::approximator::Region;
use crate::error::{Error, Result};
use crate::feature_map::FeatureMapSpec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    OracleCheck,
    Fit,
    Bernstein,
    RateCurve,
    Sequential,
    Counterexample,
    Classify,
    DedupCount,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::OracleCheck,
        ExperimentKind::Fit,
        ExperimentKind::Bernstein,
        ExperimentKind::RateCurve,
        ExperimentKind::Sequential,
        ExperimentKind::Counterexample,
        ExperimentKind::Classify,
        ExperimentKind::DedupCount,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::OracleCheck => "oracle-check",
            ExperimentKind::Fit => "fit",
            ExperimentKind::Bernstein => "bernstein",
            ExperimentKind::RateCurve => "rate-curve",
            ExperimentKind::Sequential => "sequential",
            ExperimentKind::Counterexample => "counterexample",
            ExperimentKind::Classify => "classify",
            ExperimentKind::DedupCount => "dedup-count",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::config(format!("unknown experiment '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    #[serde(default = "default_oracle_tol")]
    pub oracle: f64,
    #[serde(default = "default_fit_tol")]
    pub fit: f64,
}

fn default_oracle_tol() -> f64 {
    1e-10
}

fn default_fit_tol() -> f64 {
    1e-9
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            oracle: default_oracle_tol(),
            fit: default_fit_tol(),
        }
    }
}

/// Fitting points: a uniform tensor grid plus optional seeded random points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub points_per_dim: usize,
    #[serde(default)]
    pub random_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            points_per_dim: 10,
            random_points: 0,
        }
    }
}

/// A single value or a list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TaskKind {
    TwoInterval,
    ThreeSquare,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BackendKind {
    #[default]
    Bernstein,
    LeastSquares,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassificationConfig {
    pub task: TaskKind,
    #[serde(default = "default_per_region")]
    pub per_region: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub regions: Vec<Region>,
    #[serde(default)]
    pub backend: BackendKind,
    #[serde(default = "default_ls_grid")]
    pub grid_per_dim: usize,
}

fn default_per_region() -> usize {
    50
}

fn default_ls_grid() -> usize {
    11
}

/// Experiment configuration. Fields not used by the selected experiment are
/// ignored; unknown fields are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature_map: Option<FeatureMapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n_qubits: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<OneOrMany<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_values: Option<Vec<f64>>,
    /// `[numerator, denominator]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_rationals: Option<Vec<(i64, i64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ridge_lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_accuracy: Option<f64>,
    /// Constant of the existence-only qubit bound; shape only.
    #[serde(rename = "jackson_A", default, skip_serializing_if = "Option::is_none")]
    pub jackson_a: Option<f64>,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment,
            feature_map: None,
            target: None,
            grid: None,
            tolerances: ToleranceConfig::default(),
            seed: 0,
            output_path: None,
            n_qubits: None,
            d: None,
            trials: None,
            n: None,
            epsilon: None,
            n_max: None,
            theta_values: None,
            theta_rationals: None,
            targets: None,
            ridge_lambda: None,
            classification: None,
            min_accuracy: None,
            jackson_a: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let t = self.tolerances;
        if !(t.oracle > 0.0 && t.fit > 0.0) {
            return Err(Error::config("tolerances must be positive"));
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0 && e.is_finite()) {
                return Err(Error::config("epsilon must be positive"));
            }
        }
        if let Some(l) = self.ridge_lambda {
            if !(l >= 0.0 && l.is_finite()) {
                return Err(Error::config("ridge_lambda must be >= 0"));
            }
        }
        Ok(())
    }

    pub fn require<T: Clone>(&self, value: &Option<T>, name: &str) -> Result<T> {
        value
            .clone()
            .ok_or_else(|| Error::config(format!("{} requires '{name}'", self.experiment)))
    }
}
