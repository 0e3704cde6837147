//! Dense statevector simulation of single-qubit Y rotations and diagonal
//! product observables.
//!
//! Amplitudes are stored little-endian: qubit 0 is the least significant bit of
//! the basis index, so it varies fastest.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::{MAX_QUBITS, TOLERANCES};

/// Pure state of an `n_qubits` register.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl QubitState {
    /// The all-zeros state |0…0⟩.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_capacity(n_qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Wraps an amplitude vector; its length must be a power of two and its
    /// norm one.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::domain(format!(
                "amplitude vector length {len} is not a power of two >= 2"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_capacity(n_qubits)?;
        let state = Self {
            n_qubits,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::domain(format!("state is not normalized (|ψ|² = {norm})")));
        }
        Ok(state)
    }

    /// Product state built qubit by qubit: qubit `j` is `e^{-i angles[j] Y}|0⟩`.
    pub fn product_y(angles: &[f64]) -> Result<Self> {
        let mut state = Self::zero(angles.len())?;
        for (q, &angle) in angles.iter().enumerate() {
            state.rotate_y_in_place(q, angle)?;
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies `e^{-i·angle·Y} = [[cos, -sin], [sin, cos]]` to `qubit` in place.
    pub fn rotate_y_in_place(&mut self, qubit: usize, angle: f64) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::IndexOutOfRange {
                index: qubit,
                len: self.n_qubits,
            });
        }
        if !angle.is_finite() {
            return Err(Error::domain(format!("rotation angle {angle} is not finite")));
        }
        let (s, c) = angle.sin_cos();
        let stride = 1usize << qubit;
        for block in self.amplitudes.chunks_exact_mut(stride << 1) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x0, x1) = (*a0, *a1);
                *a0 = x0 * c - x1 * s;
                *a1 = x0 * s + x1 * c;
            }
        }
        Ok(())
    }
}

fn check_capacity(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::domain("register needs at least one qubit"));
    }
    if n_qubits > MAX_QUBITS {
        return Err(Error::Capacity {
            requested: n_qubits,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Returns a copy of `state` with `e^{-i·angle·Y}` applied on `qubit_index`.
pub fn apply_y_rotation(state: &QubitState, qubit_index: usize, angle: f64) -> Result<QubitState> {
    let mut out = state.clone();
    out.rotate_y_in_place(qubit_index, angle)?;
    Ok(out)
}

/// Per-qubit factor of a [`ProductObservable`]. All four are diagonal in the
/// computational basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Factor {
    Identity,
    PauliZ,
    /// (I + Z) / 2
    ProjPlus,
    /// (I - Z) / 2
    ProjMinus,
}

impl Factor {
    /// Diagonal entry for computational basis bit `bit`.
    #[inline]
    pub fn diagonal(self, bit: bool) -> f64 {
        match (self, bit) {
            (Factor::Identity, _) => 1.0,
            (Factor::PauliZ, false) => 1.0,
            (Factor::PauliZ, true) => -1.0,
            (Factor::ProjPlus, false) | (Factor::ProjMinus, true) => 1.0,
            (Factor::ProjPlus, true) | (Factor::ProjMinus, false) => 0.0,
        }
    }
}

/// Tensor product of per-qubit factors; `factors[q]` acts on qubit `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProductObservable {
    pub factors: Vec<Factor>,
}

impl ProductObservable {
    pub fn new(factors: Vec<Factor>) -> Self {
        Self { factors }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::new(vec![Factor::Identity; n_qubits])
    }

    /// `Z` on qubit `j`, identity elsewhere.
    pub fn z_at(n_qubits: usize, j: usize) -> Self {
        let mut factors = vec![Factor::Identity; n_qubits];
        factors[j] = Factor::PauliZ;
        Self::new(factors)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Applies the observable to a raw amplitude vector in place, one qubit
    /// factor at a time.
    fn apply_in_place(&self, amplitudes: &mut [Complex64]) {
        for (q, factor) in self.factors.iter().enumerate() {
            if *factor == Factor::Identity {
                continue;
            }
            let d0 = factor.diagonal(false);
            let d1 = factor.diagonal(true);
            let stride = 1usize << q;
            for block in amplitudes.chunks_exact_mut(stride << 1) {
                let (lo, hi) = block.split_at_mut(stride);
                lo.iter_mut().for_each(|a| *a *= d0);
                hi.iter_mut().for_each(|a| *a *= d1);
            }
        }
    }
}

/// ⟨ψ|O|ψ⟩. Errors if the factor count differs from the register size or the
/// result has a non-negligible imaginary part.
pub fn expectation(state: &QubitState, obs: &ProductObservable) -> Result<f64> {
    if obs.len() != state.n_qubits {
        return Err(Error::Shape {
            what: "observable factors",
            expected: state.n_qubits,
            found: obs.len(),
        });
    }
    let mut applied = state.amplitudes.clone();
    obs.apply_in_place(&mut applied);
    let value = dot(&state.amplitudes, &applied);
    if value.im.abs() > TOLERANCES.imaginary {
        return Err(Error::NotReal(value.im));
    }
    Ok(value.re)
}

/// ⟨a|b⟩, conjugate-linear in `a`.
pub fn inner_product(a: &QubitState, b: &QubitState) -> Result<Complex64> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::Shape {
            what: "inner product",
            expected: a.n_qubits,
            found: b.n_qubits,
        });
    }
    Ok(dot(&a.amplitudes, &b.amplitudes))
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
