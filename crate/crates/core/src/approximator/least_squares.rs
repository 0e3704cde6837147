//! Output-weight fitting for `f(x) = Σ_k w_k ψ_k(x)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::design::DesignMatrix;
use super::ModelRecord;
use crate::error::{Error, Result};
use crate::feature_map::{BasisLabel, Evaluation, FeatureMapSpec};

/// QR is accepted when `min|R_ii| / max|R_ii|` stays above this ratio.
const QR_CONDITION_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    Qr,
    Svd,
}

/// Fitted output weights.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub labels: Vec<BasisLabel>,
    pub ridge_lambda: f64,
    /// `‖Ψw - g‖₂` over the fitting points.
    pub residual_norm: f64,
    pub rank: usize,
    /// Set when `λ = 0` and the design matrix has rank below its column count;
    /// the weights are then the minimum-norm solution.
    pub rank_deficient: bool,
    pub solver: Solver,
    pub feature_map: Option<FeatureMapSpec>,
    pub seed: Option<u64>,
}

impl LinearModel {
    pub fn with_feature_map(mut self, spec: FeatureMapSpec) -> Self {
        self.feature_map = Some(spec);
        self
    }

    /// `Σ w_k row_k` for precomputed basis values.
    pub fn predict_row(&self, row: &[f64]) -> Result<f64> {
        if row.len() != self.weights.len() {
            return Err(Error::Shape {
                what: "basis row",
                expected: self.weights.len(),
                found: row.len(),
            });
        }
        Ok(row.iter().zip(&self.weights).map(|(a, b)| a * b).sum())
    }

    /// Evaluates the model at `x` through its feature map (closed form).
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        let spec = self
            .feature_map
            .as_ref()
            .ok_or_else(|| Error::config("model has no feature map attached"))?;
        let row: Vec<f64> = self
            .labels
            .iter()
            .map(|l| spec.basis_value(l, x, Evaluation::ClosedForm))
            .collect::<Result<_>>()?;
        self.predict_row(&row)
    }

    /// `‖Ψw - g‖² + λ‖w‖²` for arbitrary weights.
    pub fn penalized_objective(dm: &DesignMatrix, targets: &[f64], weights: &[f64], lambda: f64) -> f64 {
        let w = DVector::from_column_slice(weights);
        let r = dm.values() * &w - DVector::from_column_slice(targets);
        r.norm_squared() + lambda * w.norm_squared()
    }

    pub fn to_record(&self) -> Result<ModelRecord> {
        if self.weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::domain("model has non-finite weights"));
        }
        Ok(ModelRecord {
            kind: "linear".into(),
            d: self.feature_map.as_ref().map_or(0, FeatureMapSpec::d),
            n: None,
            n_qubits: self.feature_map.as_ref().map(FeatureMapSpec::n_qubits),
            labels: self.labels.clone(),
            weights: self.weights.clone(),
            metadata: super::ModelMetadata {
                seed: self.seed,
                ridge_lambda: self.ridge_lambda,
                residual_norm: Some(self.residual_norm),
                rank: Some(self.rank),
                rank_deficient: Some(self.rank_deficient),
            },
            feature_map: self.feature_map.clone(),
        })
    }
}

/// Minimizes `Σ_m (f(x_m) - g_m)² + λ‖w‖²`.
///
/// Uses Householder QR on the (ridge-augmented) system; when the triangular
/// factor is numerically singular it falls back to an SVD pseudo-inverse, which
/// yields the minimum-norm solution.
pub fn fit_least_squares(dm: &DesignMatrix, targets: &[f64], ridge_lambda: f64) -> Result<LinearModel> {
    let (m, k) = (dm.nrows(), dm.ncols());
    if targets.len() != m {
        return Err(Error::Shape {
            what: "targets",
            expected: m,
            found: targets.len(),
        });
    }
    if !(ridge_lambda >= 0.0 && ridge_lambda.is_finite()) {
        return Err(Error::domain(format!("ridge lambda {ridge_lambda} must be finite and >= 0")));
    }
    if targets.iter().any(|t| !t.is_finite()) {
        return Err(Error::domain("targets must be finite"));
    }

    let (a, b) = if ridge_lambda > 0.0 {
        let mut a = DMatrix::zeros(m + k, k);
        a.rows_mut(0, m).copy_from(dm.values());
        a.rows_mut(m, k).fill_diagonal(ridge_lambda.sqrt());
        let mut b = DVector::zeros(m + k);
        b.rows_mut(0, m).copy_from_slice(targets);
        (a, b)
    } else {
        (dm.values().clone(), DVector::from_column_slice(targets))
    };

    let (w, rank, solver) = match solve_qr(&a, &b) {
        Some(w) => (w, k, Solver::Qr),
        None => {
            let (w, rank) = solve_svd(a, &b)?;
            (w, rank, Solver::Svd)
        }
    };

    let residual = dm.values() * &w - DVector::from_column_slice(targets);
    Ok(LinearModel {
        weights: w.iter().copied().collect(),
        labels: dm.column_labels().to_vec(),
        ridge_lambda,
        residual_norm: residual.norm(),
        rank,
        rank_deficient: rank < k,
        solver,
        feature_map: None,
        seed: None,
    })
}

fn solve_qr(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let k = a.ncols();
    if a.nrows() < k {
        return None;
    }
    let qr = a.clone().qr();
    let r = qr.r();
    let diag = r.diagonal().map(f64::abs);
    let (lo, hi) = (diag.min(), diag.max());
    if !(hi > 0.0) || lo <= QR_CONDITION_FLOOR * hi {
        return None;
    }
    let qtb = qr.q().transpose() * b;
    r.solve_upper_triangular(&qtb)
}

fn solve_svd(a: DMatrix<f64>, b: &DVector<f64>) -> Result<(DVector<f64>, usize)> {
    let (m, k) = (a.nrows(), a.ncols());
    let svd = a.svd(true, true);
    let sigma_max = svd.singular_values.max();
    let cutoff = m.max(k) as f64 * f64::EPSILON * sigma_max;
    let rank = svd.singular_values.iter().filter(|&&s| s > cutoff).count();
    let w = svd
        .solve(b, cutoff)
        .map_err(|e| Error::domain(format!("SVD solve failed: {e}")))?;
    Ok((w, rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feature_map::AlphaIndex;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn grid(n: usize) -> Vec<Vec<f64>> {
        (0..n).map(|i| vec![i as f64 / (n - 1) as f64]).collect()
    }

    #[test]
    fn recovers_linear_target_exactly() {
        let spec = FeatureMapSpec::parallel_arccos(1, 1).unwrap();
        let labels = vec![
            BasisLabel::Alpha(AlphaIndex::zeros(1)),
            BasisLabel::Alpha(AlphaIndex::new(vec![1]).unwrap()),
        ];
        let pts = grid(11);
        let targets: Vec<f64> = pts.iter().map(|x| 2.0 * x[0] - 1.0).collect();
        let dm = DesignMatrix::build(&spec, labels, pts, Evaluation::ClosedForm).unwrap();
        let model = fit_least_squares(&dm, &targets, 0.0).unwrap();
        assert_abs_diff_eq!(model.weights[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(model.weights[1], 1.0, epsilon = 1e-12);
        assert!(model.residual_norm < 1e-12);
        assert_eq!(model.solver, Solver::Qr);
    }

    #[test]
    fn zero_targets_with_ridge() {
        let spec = FeatureMapSpec::parallel_arccos(1, 3).unwrap();
        let labels = spec.default_labels().unwrap();
        let dm = DesignMatrix::build(&spec, labels, grid(9), Evaluation::ClosedForm).unwrap();
        let model = fit_least_squares(&dm, &[0.0; 9], 0.5).unwrap();
        assert!(model.weights.iter().all(|&w| w == 0.0));
        assert_eq!(model.residual_norm, 0.0);
    }

    #[test]
    fn product_target_two_qubits() {
        let spec = FeatureMapSpec::parallel_arccos(2, 2).unwrap();
        let pts: Vec<Vec<f64>> = (0..10)
            .flat_map(|i| (0..10).map(move |j| vec![i as f64 / 9.0, j as f64 / 9.0]))
            .collect();
        let targets: Vec<f64> = pts.iter().map(|x| x[0] * x[1]).collect();
        let dm = DesignMatrix::build(&spec, spec.default_labels().unwrap(), pts, Evaluation::ClosedForm).unwrap();
        let model = fit_least_squares(&dm, &targets, 0.0).unwrap();
        assert!(model.residual_norm < 1e-9);
        // x1 x2 = (1 + ψ_10 + ψ_01 + ψ_11) / 4.
        for w in &model.weights {
            assert_abs_diff_eq!(*w, 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn rank_deficiency_gives_minimum_norm() {
        // Duplicate column: the minimum-norm solution splits the weight evenly.
        let pts = grid(5);
        let col: Vec<f64> = pts.iter().map(|x| 2.0 * x[0] - 1.0).collect();
        let values = DMatrix::from_fn(5, 2, |i, _| col[i]);
        let labels = vec![BasisLabel::Qubit(0), BasisLabel::Qubit(1)];
        let dm = DesignMatrix::from_values(values, labels, pts).unwrap();
        let model = fit_least_squares(&dm, &col, 0.0).unwrap();
        assert!(model.rank_deficient);
        assert_eq!(model.rank, 1);
        assert_eq!(model.solver, Solver::Svd);
        assert_abs_diff_eq!(model.weights[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(model.weights[1], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn input_validation() {
        let dm = DesignMatrix::from_values(DMatrix::from_element(2, 1, 0.5), vec![BasisLabel::Qubit(0)], grid(2))
            .unwrap();
        assert!(fit_least_squares(&dm, &[1.0], 0.0).is_err());
        assert!(fit_least_squares(&dm, &[1.0, 2.0], -1.0).is_err());
        assert!(fit_least_squares(&dm, &[1.0, f64::NAN], 0.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn fitted_weights_are_locally_optimal(
            seed in any::<u64>(),
            lambda in prop_oneof![Just(0.0), 1e-4f64..1.0],
            targets in prop::collection::vec(-2.0f64..2.0, 12),
        ) {
            let spec = FeatureMapSpec::parallel_activation(2, 5, crate::feature_map::ActivationKind::Tanh, seed).unwrap();
            let pts: Vec<Vec<f64>> = (0..12).map(|i| vec![(i % 4) as f64 / 3.0, (i / 4) as f64 / 2.0]).collect();
            let dm = DesignMatrix::build(&spec, spec.default_labels().unwrap(), pts, Evaluation::ClosedForm).unwrap();
            let model = fit_least_squares(&dm, &targets, lambda).unwrap();
            let base = LinearModel::penalized_objective(&dm, &targets, &model.weights, lambda);
            for k in 0..model.weights.len() {
                for step in [-1e-3, 1e-3] {
                    let mut w = model.weights.clone();
                    w[k] += step;
                    let perturbed = LinearModel::penalized_objective(&dm, &targets, &w, lambda);
                    prop_assert!(perturbed >= base - 1e-12, "coordinate {} step {}: {} < {}", k, step, perturbed, base);
                }
            }
        }
    }
}
