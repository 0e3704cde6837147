//! Approximators built on the feature-map basis functions.

mod bernstein;
mod bounds;
mod classify;
mod design;
mod least_squares;
mod sequential;
mod sup_norm;

pub use bernstein::BernsteinApproximator;
pub use bounds::{
    bound_s4, jackson_qubits, m_epsilon, m_epsilon_lipschitz, m_epsilon_numeric, min_bound_s4, qubits_for_epsilon,
    MEpsilonMethod, Omega, QubitEstimate, RateBoundSpec, DELTA_GRID_LEN,
};
pub use classify::{
    classify_regions, three_square_task, two_interval_task, ClassificationReport, FitBackend, Region,
};
pub use design::DesignMatrix;
pub use least_squares::{fit_least_squares, LinearModel, Solver};
pub use sequential::{
    chebyshev_floor, counterexample_enumerate, sequential_search, AcceptedBy, CounterexampleReport, Rational,
    SearchOutcome,
};
pub use sup_norm::{grid_points, grid_points_per_dim, sup_error, SupErrorReport, RANDOM_PROBES};

use serde::{Deserialize, Serialize};

use crate::feature_map::{BasisLabel, FeatureMapSpec};

/// JSON form of a fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelRecord {
    pub kind: String,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n_qubits: Option<usize>,
    pub labels: Vec<BasisLabel>,
    pub weights: Vec<f64>,
    pub metadata: ModelMetadata,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature_map: Option<FeatureMapSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelMetadata {
    pub seed: Option<u64>,
    pub ridge_lambda: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_norm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_deficient: Option<bool>,
}
