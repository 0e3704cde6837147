//! Closed-form basis functions.

use std::f64::consts::TAU;

use super::activation::ActivationSpec;
use super::observables::AlphaIndex;
use crate::error::{Error, Result};

/// Fractional part `r - ⌊r⌋ ∈ [0, 1)`.
#[inline]
pub fn frac(r: f64) -> f64 {
    r - r.floor()
}

pub(crate) fn check_unit_cube(x: &[f64], d: usize) -> Result<()> {
    if x.len() != d {
        return Err(Error::Shape {
            what: "input vector",
            expected: d,
            found: x.len(),
        });
    }
    if let Some(v) = x.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::domain(format!("input coordinate {v} outside [0, 1]")));
    }
    Ok(())
}

/// `ψ_α(x) = ∏_i (2 x_{[i]} - 1)^{α_i}` where qubit `i` reads coordinate `i mod d`.
pub fn basis_parallel_closed(x: &[f64], alpha: &AlphaIndex, d: usize) -> Result<f64> {
    if d == 0 || alpha.len() < d {
        return Err(Error::domain(format!(
            "alpha length {} must be at least d = {d} >= 1",
            alpha.len()
        )));
    }
    check_unit_cube(x, d)?;
    Ok(alpha
        .bits()
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .map(|(q, _)| 2.0 * x[q % d] - 1.0)
        .product())
}

/// `ψ_j(x) = σ(a_j·x + b_j)`.
pub fn basis_activation_closed(x: &[f64], j: usize, act: &ActivationSpec) -> Result<f64> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("input vector has a non-finite coordinate"));
    }
    act.value(j, x)
}

/// `ψ_n = cos(2π {nθ})`.
pub fn basis_sequential_closed(theta: f64, n: u64) -> f64 {
    (TAU * frac(n as f64 * theta)).cos()
}
