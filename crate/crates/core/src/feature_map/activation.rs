use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::TOLERANCES;

/// Half-width of the uniform box the random weights and biases are drawn from.
pub const SAMPLING_HALF_WIDTH: f64 = 2.0;

/// Activation functions with range [-1, 1].
///
/// Density of `σ(a·x + b)` in L² is assumed for these kinds, not checked:
/// `Tanh` is a bounded sigmoid, `Cosine` spans the Fourier basis and
/// `PiecewiseSign` is a nonconstant step function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ActivationKind {
    Tanh,
    Cosine,
    PiecewiseSign,
}

impl ActivationKind {
    pub fn apply(self, z: f64) -> f64 {
        match self {
            ActivationKind::Tanh => z.tanh(),
            ActivationKind::Cosine => z.cos(),
            ActivationKind::PiecewiseSign => {
                if z > 0.0 {
                    1.0
                } else if z < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn density_note(self) -> &'static str {
        match self {
            ActivationKind::Tanh => "tanh: bounded nonconstant sigmoid; L2 density of ridge functions assumed",
            ActivationKind::Cosine => "cosine: ridge cosines span trigonometric polynomials; L2 density assumed",
            ActivationKind::PiecewiseSign => {
                "piecewise sign: nonconstant step with finitely many jumps; L2 density assumed"
            }
        }
    }
}

/// Activation plus the per-qubit affine parameters `(a_j, b_j)`.
///
/// Parameters are a pure function of `(kind, seed, d, n_qubits)`: a
/// `ChaCha8Rng` seeded with `seed_from_u64(seed)` draws, for each qubit in
/// order, `d` weights then one bias, all uniform on `[-2, 2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationSpec {
    kind: ActivationKind,
    seed: u64,
    weights: Vec<Vec<f64>>,
    biases: Vec<f64>,
}

impl ActivationSpec {
    pub fn from_seed(kind: ActivationKind, seed: u64, d: usize, n_qubits: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dist = Uniform::new_inclusive(-SAMPLING_HALF_WIDTH, SAMPLING_HALF_WIDTH);
        let mut weights = Vec::with_capacity(n_qubits);
        let mut biases = Vec::with_capacity(n_qubits);
        for _ in 0..n_qubits {
            weights.push((0..d).map(|_| dist.sample(&mut rng)).collect());
            biases.push(dist.sample(&mut rng));
        }
        Self {
            kind,
            seed,
            weights,
            biases,
        }
    }

    /// Explicit parameters, mostly for tests and hand-built examples.
    pub fn with_parameters(kind: ActivationKind, weights: Vec<Vec<f64>>, biases: Vec<f64>) -> Result<Self> {
        if weights.len() != biases.len() {
            return Err(Error::Shape {
                what: "activation biases",
                expected: weights.len(),
                found: biases.len(),
            });
        }
        if let Some(d) = weights.first().map(Vec::len) {
            if let Some(bad) = weights.iter().find(|w| w.len() != d) {
                return Err(Error::Shape {
                    what: "activation weight vector",
                    expected: d,
                    found: bad.len(),
                });
            }
        }
        Ok(Self {
            kind,
            seed: 0,
            weights,
            biases,
        })
    }

    pub fn kind(&self) -> ActivationKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    pub fn n_qubits(&self) -> usize {
        self.biases.len()
    }

    /// `σ(a_j·x + b_j)`, checked to lie in [-1, 1].
    pub fn value(&self, j: usize, x: &[f64]) -> Result<f64> {
        let a = self.weights.get(j).ok_or(Error::IndexOutOfRange {
            index: j,
            len: self.weights.len(),
        })?;
        if a.len() != x.len() {
            return Err(Error::Shape {
                what: "input vector",
                expected: a.len(),
                found: x.len(),
            });
        }
        let z: f64 = a.iter().zip(x).map(|(ai, xi)| ai * xi).sum::<f64>() + self.biases[j];
        let s = self.kind.apply(z);
        if !s.is_finite() || s.abs() > 1.0 + TOLERANCES.activation_range {
            return Err(Error::domain(format!("activation value {s} outside [-1, 1]")));
        }
        Ok(s.clamp(-1.0, 1.0))
    }
}
