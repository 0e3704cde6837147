use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::feature_map::{BasisLabel, Evaluation, FeatureMapSpec};

/// Entries may exceed [-1, 1] by this much through rounding.
const RANGE_SLACK: f64 = 1e-12;

/// `M × K` matrix of basis-function values `ψ_k(x_m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    values: DMatrix<f64>,
    column_labels: Vec<BasisLabel>,
    sample_points: Vec<Vec<f64>>,
}

impl DesignMatrix {
    pub fn from_values(
        values: DMatrix<f64>,
        column_labels: Vec<BasisLabel>,
        sample_points: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if values.nrows() == 0 || values.ncols() == 0 {
            return Err(Error::domain("design matrix is empty"));
        }
        if values.ncols() != column_labels.len() {
            return Err(Error::Shape {
                what: "column labels",
                expected: values.ncols(),
                found: column_labels.len(),
            });
        }
        if values.nrows() != sample_points.len() {
            return Err(Error::Shape {
                what: "sample points",
                expected: values.nrows(),
                found: sample_points.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !(v.abs() <= 1.0 + RANGE_SLACK)) {
            return Err(Error::domain(format!("basis value {v} outside [-1, 1]")));
        }
        Ok(Self {
            values,
            column_labels,
            sample_points,
        })
    }

    /// Evaluates `labels` of a parallel feature map at every point.
    pub fn build(
        spec: &FeatureMapSpec,
        labels: Vec<BasisLabel>,
        points: Vec<Vec<f64>>,
        mode: Evaluation,
    ) -> Result<Self> {
        let rows: Vec<Vec<f64>> = points
            .par_iter()
            .map(|x| labels.iter().map(|l| spec.basis_value(l, x, mode)).collect())
            .collect::<Result<_>>()?;
        let values = DMatrix::from_fn(rows.len(), labels.len(), |i, k| rows[i][k]);
        Self::from_values(values, labels, points)
    }

    /// Sequential-map columns `ψ_n` for each `n` in `iterations`; rows are the
    /// points of the finite input set, recorded as `[θ(x_m)]`.
    pub fn sequential(spec: &FeatureMapSpec, iterations: &[u64], mode: Evaluation) -> Result<Self> {
        let m = spec.theta_values().len();
        let mut values = DMatrix::zeros(m, iterations.len());
        for i in 0..m {
            for (k, &n) in iterations.iter().enumerate() {
                values[(i, k)] = spec.sequential_value(i, n, mode)?;
            }
        }
        let labels = iterations.iter().map(|&n| BasisLabel::Iteration(n)).collect();
        let points = spec.theta_values().iter().map(|&t| vec![t]).collect();
        Self::from_values(values, labels, points)
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn column_labels(&self) -> &[BasisLabel] {
        &self.column_labels
    }

    pub fn sample_points(&self) -> &[Vec<f64>] {
        &self.sample_points
    }

    pub fn nrows(&self) -> usize {
        self.values.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.values.ncols()
    }
}
