use rayon::prelude::*;

use super::{ModelMetadata, ModelRecord};
use crate::error::{Error, Result};
use crate::feature_map::{multi_indices, BasisLabel, Evaluation, FeatureMapSpec, MultiDegree};

/// Multivariate Bernstein polynomial
/// `P(x) = Σ_p g(p/n) ∏_i C(n, p_i) x_i^{p_i} (1 - x_i)^{n - p_i}`.
///
/// Samples are stored in flat order with `p_1` varying fastest, matching
/// [`MultiDegree::all`].
#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinApproximator {
    d: usize,
    n: usize,
    samples: Vec<f64>,
}

impl BernsteinApproximator {
    pub fn new(d: usize, n: usize, samples: Vec<f64>) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(Error::domain(format!("need d >= 1 and n >= 1, got d={d}, n={n}")));
        }
        let expected = (n + 1)
            .checked_pow(d as u32)
            .ok_or_else(|| Error::domain("(n+1)^d overflows"))?;
        if samples.len() != expected {
            return Err(Error::Shape {
                what: "Bernstein samples",
                expected,
                found: samples.len(),
            });
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::domain("Bernstein samples must be finite"));
        }
        Ok(Self { d, n, samples })
    }

    /// Samples `g` at every node `p/n`.
    pub fn from_fn(d: usize, n: usize, g: impl Fn(&[f64]) -> f64 + Sync) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(Error::domain(format!("need d >= 1 and n >= 1, got d={d}, n={n}")));
        }
        let upper = vec![n; d];
        let nodes: Vec<Vec<usize>> = multi_indices(&upper).collect();
        let samples = nodes
            .par_iter()
            .map(|p| {
                let x: Vec<f64> = p.iter().map(|&pi| pi as f64 / n as f64).collect();
                g(&x)
            })
            .collect();
        Self::new(d, n, samples)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Qubit count `N = n·d` of the equivalent quantum model.
    pub fn n_qubits(&self) -> usize {
        self.n * self.d
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Output weights `w_p = g(p/n) ∏ C(n, p_i)`. Entries overflow to infinity
    /// once the binomials exceed `f64` range (around `n > 1020`).
    pub fn weights(&self) -> Vec<f64> {
        let binom = binomial_row(self.n);
        let upper = vec![self.n; self.d];
        multi_indices(&upper)
            .zip(&self.samples)
            .map(|(p, g)| g * p.iter().map(|&pi| binom[pi]).product::<f64>())
            .collect()
    }

    pub fn degrees(&self) -> Vec<MultiDegree> {
        MultiDegree::all(self.d, self.n)
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.d {
            return Err(Error::Shape {
                what: "input vector",
                expected: self.d,
                found: x.len(),
            });
        }
        if let Some(v) = x.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::domain(format!("input coordinate {v} outside [0, 1]")));
        }
        Ok(())
    }

    /// `P(x)` by contracting the sample tensor with per-dimension Bernstein
    /// basis vectors, `O(d (n+1)^d)` per point.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        let m = self.n + 1;
        let mut tensor = self.samples.clone();
        for &xi in x {
            let basis = bernstein_basis(self.n, xi);
            tensor = tensor
                .chunks_exact(m)
                .map(|fiber| fiber.iter().zip(&basis).map(|(a, b)| a * b).sum())
                .collect();
        }
        Ok(tensor[0])
    }

    /// `P(x)` by repeated de Casteljau reduction along each dimension.
    pub fn evaluate_de_casteljau(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        let m = self.n + 1;
        let mut tensor = self.samples.clone();
        for &xi in x {
            tensor = tensor
                .chunks_exact(m)
                .map(|fiber| {
                    let mut b = fiber.to_vec();
                    for r in 1..m {
                        for k in 0..m - r {
                            b[k] = (1.0 - xi) * b[k] + xi * b[k + 1];
                        }
                    }
                    b[0]
                })
                .collect();
        }
        Ok(tensor[0])
    }

    /// `Σ_p w_p ⟨O_p⟩` measured on the `N = n·d` qubit statevector encoding of
    /// `x` with projector observables.
    pub fn quantum_output(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        let spec = FeatureMapSpec::parallel_arccos(self.d, self.n_qubits())?;
        let state = spec.encode(x)?;
        self.degrees()
            .into_iter()
            .zip(self.weights())
            .map(|(p, w)| {
                let obs = spec.observable(&BasisLabel::Degree(p))?;
                Ok(w * crate::statevector::expectation(&state, &obs)?)
            })
            .sum()
    }

    /// `Σ_p w_p ψ_p(x)` through the feature-map basis functions.
    pub fn framework_output(&self, x: &[f64], mode: Evaluation) -> Result<f64> {
        let spec = FeatureMapSpec::parallel_arccos(self.d, self.n_qubits())?;
        self.degrees()
            .into_iter()
            .zip(self.weights())
            .map(|(p, w)| Ok(w * spec.basis_value(&BasisLabel::Degree(p), x, mode)?))
            .sum()
    }

    pub fn to_record(&self, seed: Option<u64>) -> Result<ModelRecord> {
        let weights = self.weights();
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::domain(format!(
                "Bernstein weights overflow f64 at n = {}",
                self.n
            )));
        }
        Ok(ModelRecord {
            kind: "bernstein".into(),
            d: self.d,
            n: Some(self.n),
            n_qubits: Some(self.n_qubits()),
            labels: self.degrees().into_iter().map(BasisLabel::Degree).collect(),
            weights,
            metadata: ModelMetadata {
                seed,
                ridge_lambda: 0.0,
                residual_norm: None,
                rank: None,
                rank_deficient: None,
            },
            feature_map: None,
        })
    }
}

/// `C(n, k)` for `k = 0..=n` as floats.
fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0; n + 1];
    for k in 1..=n {
        row[k] = row[k - 1] * (n - k + 1) as f64 / k as f64;
    }
    row
}

/// `b_p = C(n, p) x^p (1 - x)^{n - p}` for `p = 0..=n`.
///
/// Seeded with 1 at the mode and propagated outward by the term ratio, then
/// normalized by the sum (the basis is a partition of unity). Avoids both the
/// overflow of `C(n, p)` and the underflow of `x^p`.
pub(crate) fn bernstein_basis(n: usize, x: f64) -> Vec<f64> {
    let mut b = vec![0.0; n + 1];
    if x <= 0.0 {
        b[0] = 1.0;
        return b;
    }
    if x >= 1.0 {
        b[n] = 1.0;
        return b;
    }
    let mode = (((n + 1) as f64 * x).floor() as usize).min(n);
    let odds = x / (1.0 - x);
    b[mode] = 1.0;
    for p in mode..n {
        b[p + 1] = b[p] * (n - p) as f64 / (p + 1) as f64 * odds;
    }
    for p in (1..=mode).rev() {
        b[p - 1] = b[p] * p as f64 / (n - p + 1) as f64 / odds;
    }
    let total: f64 = b.iter().sum();
    b.iter_mut().for_each(|v| *v /= total);
    b
}
