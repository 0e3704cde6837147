//! Uniform error bounds for the Bernstein construction and the qubit counts
//! they imply.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of log-spaced `δ` values searched when minimizing over `δ`.
pub const DELTA_GRID_LEN: usize = 400;
const DELTA_GRID_MIN: f64 = 1e-6;

/// Modulus of continuity model `ω(δ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Omega {
    /// `ω(δ) = C δ`.
    Lipschitz { c: f64 },
    /// Piecewise-linear through `(0, 0)` and the tabulated `(δ_k, ω_k)`;
    /// extended past the last node by subadditivity,
    /// `ω(δ) = ⌈δ / δ_last⌉ ω_last`.
    Tabulated { deltas: Vec<f64>, values: Vec<f64> },
}

impl Omega {
    pub fn eval(&self, delta: f64) -> f64 {
        match self {
            Omega::Lipschitz { c } => c * delta,
            Omega::Tabulated { deltas, values } => {
                let last = deltas.len() - 1;
                if delta > deltas[last] {
                    return (delta / deltas[last]).ceil() * values[last];
                }
                let k = deltas.partition_point(|&t| t < delta);
                let (d0, w0) = if k == 0 { (0.0, 0.0) } else { (deltas[k - 1], values[k - 1]) };
                let (d1, w1) = (deltas[k], values[k]);
                if d1 == d0 {
                    return w1;
                }
                w0 + (w1 - w0) * (delta - d0) / (d1 - d0)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Omega::Lipschitz { c } => {
                if !(*c > 0.0 && c.is_finite()) {
                    return Err(Error::domain(format!("Lipschitz constant {c} must be positive")));
                }
            }
            Omega::Tabulated { deltas, values } => {
                if deltas.is_empty() || deltas.len() != values.len() {
                    return Err(Error::domain("tabulated modulus needs equal, non-empty delta and value lists"));
                }
                let increasing = deltas.windows(2).all(|w| w[0] < w[1]) && deltas[0] > 0.0;
                let nondecreasing = values.windows(2).all(|w| w[0] <= w[1]) && values[0] >= 0.0;
                let finite = deltas.iter().chain(values).all(|v| v.is_finite());
                if !(increasing && nondecreasing && finite) {
                    return Err(Error::domain(
                        "tabulated modulus must have positive increasing deltas and nondecreasing values",
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Inputs to the Bernstein error bound. `m` must dominate `ω(√d)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateBoundSpec {
    pub d: usize,
    pub m: f64,
    pub omega: Omega,
}

impl RateBoundSpec {
    pub fn new(d: usize, m: f64, omega: Omega) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("dimension must be >= 1"));
        }
        omega.validate()?;
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::domain(format!("M = {m} must be positive")));
        }
        let at_diameter = omega.eval((d as f64).sqrt());
        if m < at_diameter {
            return Err(Error::Condition(format!("M = {m} is below ω(√d) = {at_diameter}")));
        }
        Ok(Self { d, m, omega })
    }

    /// Lipschitz target with the tightest admissible `M = C √d`.
    pub fn lipschitz(d: usize, c: f64) -> Result<Self> {
        Self::new(d, c * (d as f64).sqrt(), Omega::Lipschitz { c })
    }

    pub fn lipschitz_constant(&self) -> Option<f64> {
        match self.omega {
            Omega::Lipschitz { c } => Some(c),
            Omega::Tabulated { .. } => None,
        }
    }
}

/// `ω(δ) + M ((1 + d / (4 n δ²))^d − 1)`.
pub fn bound_s4(spec: &RateBoundSpec, n: u64, delta: f64) -> Result<f64> {
    if n == 0 || !(delta > 0.0) {
        return Err(Error::domain(format!("need n >= 1 and δ > 0, got n={n}, δ={delta}")));
    }
    let d = spec.d as f64;
    let growth = (d * (d / (4.0 * n as f64 * delta * delta)).ln_1p()).exp_m1();
    Ok(spec.omega.eval(delta) + spec.m * growth)
}

fn delta_grid(d: usize) -> impl Iterator<Item = f64> {
    let hi = (d as f64).sqrt();
    let ratio = (hi / DELTA_GRID_MIN).ln();
    (1..=DELTA_GRID_LEN).map(move |k| {
        if k == DELTA_GRID_LEN {
            hi
        } else {
            DELTA_GRID_MIN * (ratio * k as f64 / DELTA_GRID_LEN as f64).exp()
        }
    })
}

/// Smallest [`bound_s4`] over the log-spaced `δ` grid; returns `(bound, δ)`.
pub fn min_bound_s4(spec: &RateBoundSpec, n: u64) -> Result<(f64, f64)> {
    let mut best = (f64::INFINITY, f64::NAN);
    for delta in delta_grid(spec.d) {
        let b = bound_s4(spec, n, delta)?;
        if b < best.0 {
            best = (b, delta);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MEpsilonMethod {
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitEstimate {
    pub m_epsilon: f64,
    /// Per-variable degree `⌊m(ε)⌋ + 1`.
    pub degree: u64,
    #[serde(rename = "N")]
    pub n_qubits: u64,
    pub method: MEpsilonMethod,
}

fn check_epsilon(spec: &RateBoundSpec, epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::domain(format!("ε = {epsilon} must be positive")));
    }
    if epsilon >= 2.0 * spec.m {
        return Err(Error::Condition(format!("ε = {epsilon} must be below 2M = {}", 2.0 * spec.m)));
    }
    Ok(())
}

fn m_objective(spec: &RateBoundSpec, epsilon: f64, delta: f64) -> f64 {
    let gap = epsilon - spec.omega.eval(delta);
    if gap <= 0.0 {
        return f64::INFINITY;
    }
    let d = spec.d as f64;
    spec.m * d * d / (2.0 * gap * delta * delta)
}

/// `M d² 27 C² / (8 ε³)`, the exact infimum for `ω(δ) = C δ`, attained at
/// `δ = 2ε / (3C)`.
pub fn m_epsilon_lipschitz(spec: &RateBoundSpec, epsilon: f64) -> Result<f64> {
    check_epsilon(spec, epsilon)?;
    let c = spec
        .lipschitz_constant()
        .ok_or_else(|| Error::config("closed-form m(ε) needs a Lipschitz modulus"))?;
    let d = spec.d as f64;
    Ok(27.0 * spec.m * c * c * d * d / (8.0 * epsilon.powi(3)))
}

/// `inf_δ M d² / (2 (ε − ω(δ)) δ²)` over the log grid, refined by
/// golden-section search between the neighbours of the best grid point.
pub fn m_epsilon_numeric(spec: &RateBoundSpec, epsilon: f64) -> Result<f64> {
    check_epsilon(spec, epsilon)?;
    let grid: Vec<f64> = delta_grid(spec.d).collect();
    let values: Vec<f64> = grid.iter().map(|&t| m_objective(spec, epsilon, t)).collect();
    let (k, &best) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is non-empty");
    if !best.is_finite() {
        return Err(Error::Condition(format!("ω(δ) >= ε = {epsilon} on the whole δ grid")));
    }
    let mut lo = if k == 0 { DELTA_GRID_MIN } else { grid[k - 1] };
    let mut hi = grid[(k + 1).min(grid.len() - 1)];
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let f = |t: f64| m_objective(spec, epsilon, t);
    let mut a = hi - phi * (hi - lo);
    let mut b = lo + phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..200 {
        if hi - lo <= 1e-14 * hi {
            break;
        }
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = f(b);
        }
    }
    Ok(best.min(fa).min(fb))
}

/// `m(ε)` by the closed form for Lipschitz moduli, numerically otherwise.
pub fn m_epsilon(spec: &RateBoundSpec, epsilon: f64) -> Result<(f64, MEpsilonMethod)> {
    match spec.omega {
        Omega::Lipschitz { .. } => Ok((m_epsilon_lipschitz(spec, epsilon)?, MEpsilonMethod::Analytic)),
        Omega::Tabulated { .. } => Ok((m_epsilon_numeric(spec, epsilon)?, MEpsilonMethod::Numeric)),
    }
}

/// `N = d (⌊m(ε)⌋ + 1)` qubits suffice for uniform error `ε`.
pub fn qubits_for_epsilon(spec: &RateBoundSpec, epsilon: f64) -> Result<QubitEstimate> {
    let (m, method) = m_epsilon(spec, epsilon)?;
    let floor = m.floor();
    if floor >= u64::MAX as f64 {
        return Err(Error::domain(format!("m(ε) = {m} exceeds the integer range")));
    }
    let degree = floor as u64 + 1;
    let n_qubits = degree
        .checked_mul(spec.d as u64)
        .ok_or_else(|| Error::domain("qubit count overflows u64"))?;
    Ok(QubitEstimate {
        m_epsilon: m,
        degree,
        n_qubits,
        method,
    })
}

/// Smallest integer `N > A C d^{3/2} / ε`. `A` is an unknown constant, so the
/// result describes the shape of the bound only.
pub fn jackson_qubits(d: usize, c: f64, epsilon: f64, a: f64) -> Result<u64> {
    if d == 0 || !(c > 0.0) || !(epsilon > 0.0) || !(a > 0.0) {
        return Err(Error::domain("jackson_qubits needs d >= 1 and positive C, ε, A"));
    }
    let x = a * c * (d as f64).powf(1.5) / epsilon;
    if !(x < u64::MAX as f64) {
        return Err(Error::domain(format!("qubit count {x} exceeds the integer range")));
    }
    Ok(x.floor() as u64 + 1)
}
