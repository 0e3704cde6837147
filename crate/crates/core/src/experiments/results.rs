use serde::{Deserialize, Serialize};

use super::target::TargetSpec;
use crate::approximator::{QubitEstimate, SearchOutcome, Solver};
use crate::feature_map::FeatureMapSpec;

/// JSON summary written next to every CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub seed: u64,
    pub pass: bool,
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", content = "results", rename_all = "kebab-case")]
pub enum Outcome {
    OracleCheck(OracleCheckResults),
    Fit(FitResults),
    Bernstein(BernsteinResults),
    RateCurve(RateCurveResults),
    Sequential(SequentialResults),
    Counterexample(CounterexampleResults),
    Classify(ClassifyResults),
    DedupCount(DedupResults),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioStat {
    pub scenario: String,
    pub cases: usize,
    pub max_abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCheckResults {
    #[serde(rename = "N")]
    pub n_qubits: usize,
    pub d: usize,
    pub trials: usize,
    pub tolerance: f64,
    pub max_abs_diff: f64,
    pub scenarios: Vec<ScenarioStat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitResults {
    pub feature_map: FeatureMapSpec,
    pub target: TargetSpec,
    pub n_points: usize,
    pub n_basis: usize,
    pub ridge_lambda: f64,
    pub solver: Solver,
    pub rank: usize,
    pub rank_deficient: bool,
    pub residual_norm: f64,
    pub max_abs_error: f64,
    /// Set when the target is a polynomial within the per-variable degree
    /// caps of the basis, so the residual is asserted below the fit tolerance.
    pub exact_representation_expected: bool,
    pub model_file: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BernsteinRow {
    pub n: u64,
    #[serde(rename = "N")]
    pub n_qubits: u64,
    pub sup_error: f64,
    pub s4_bound: Option<f64>,
    pub best_delta: Option<f64>,
    pub oracle_max_diff: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BernsteinResults {
    pub d: usize,
    pub target: TargetSpec,
    #[serde(rename = "lipschitz_C")]
    pub lipschitz_c: Option<f64>,
    pub rows: Vec<BernsteinRow>,
    pub model_file: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateCurveResults {
    pub d: usize,
    pub target: TargetSpec,
    #[serde(rename = "lipschitz_C")]
    pub lipschitz_c: Option<f64>,
    pub rows: Vec<BernsteinRow>,
    pub log_slope: Option<f64>,
    pub slope_tail_len: usize,
    pub strictly_decreasing: bool,
    pub qubits_for_epsilon: Option<QubitEstimate>,
    pub jackson_qubits: Option<u64>,
    #[serde(rename = "jackson_A")]
    pub jackson_a: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequentialResults {
    pub theta_values: Vec<f64>,
    pub targets: Vec<f64>,
    pub epsilon: f64,
    pub n_max: u64,
    pub search: SearchOutcome,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleResults {
    pub theta_rationals: Vec<(i64, i64)>,
    pub targets: Option<Vec<f64>>,
    pub common_denominator: u64,
    pub period: u64,
    pub tuples: Vec<Vec<f64>>,
    pub error_floor: Option<f64>,
    pub best_weight: Option<f64>,
    pub epsilon: Option<f64>,
    pub n_max: Option<u64>,
    pub search: Option<SearchOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyRow {
    pub n: Option<u64>,
    pub accuracy: f64,
    pub n_separated: usize,
    pub n_points: usize,
    pub max_deviation: f64,
    pub per_region_accuracy: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyResults {
    pub task: String,
    pub backend: String,
    pub delta: f64,
    pub rows: Vec<ClassifyRow>,
    pub nondecreasing: bool,
    pub min_accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DedupResults {
    #[serde(rename = "N")]
    pub n_qubits: usize,
    pub d: usize,
    pub distinct: usize,
    pub bound: u64,
    pub brute_force_classes: Option<usize>,
}
