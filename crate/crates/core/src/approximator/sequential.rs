//! Iteration search for the sequential scenario and its rational-angle
//! counter-examples.

use std::collections::HashSet;
use std::f64::consts::TAU;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feature_map::{basis_sequential_closed, frac};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcceptedBy {
    /// Every `frac(n θ_i)` is within `ε / (2π β)` of its target phase `γ_i`.
    Phase,
    /// `max_i |β cos(2π n θ_i) − g_i| < ε` without the phase condition.
    Residual,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SearchOutcome {
    Found {
        n: u64,
        w: f64,
        max_error: f64,
        accepted_by: AcceptedBy,
    },
    NotFound {
        w: f64,
        best_n: u64,
        best_error: f64,
    },
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }
}

fn max_error(thetas: &[f64], targets: &[f64], w: f64, n: u64) -> f64 {
    thetas
        .iter()
        .zip(targets)
        .map(|(&t, &g)| (w * basis_sequential_closed(t, n) - g).abs())
        .fold(0.0, f64::max)
}

/// Finds the smallest `n <= n_max` with `max_i |w ψ_n(x_i) − g_i| < ε`, where
/// `w = β = 1 + max|g_i|`.
///
/// Exhausting the budget is a normal outcome and reports the best `n` seen.
pub fn sequential_search(thetas: &[f64], targets: &[f64], epsilon: f64, n_max: u64) -> Result<SearchOutcome> {
    if thetas.is_empty() || thetas.len() != targets.len() {
        return Err(Error::Shape {
            what: "targets",
            expected: thetas.len().max(1),
            found: targets.len(),
        });
    }
    if n_max == 0 || !(epsilon > 0.0) {
        return Err(Error::domain("need n_max >= 1 and ε > 0"));
    }
    if thetas.iter().chain(targets).any(|v| !v.is_finite()) {
        return Err(Error::domain("θ values and targets must be finite"));
    }
    let beta = 1.0 + targets.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    let gammas: Vec<f64> = targets.iter().map(|g| (g / beta).acos() / TAU).collect();
    let phase_tol = epsilon / (TAU * beta);

    let check = |n: u64| -> Option<AcceptedBy> {
        let phase_ok = thetas
            .iter()
            .zip(&gammas)
            .all(|(&t, &gam)| (frac(n as f64 * t) - gam).abs() < phase_tol);
        if phase_ok {
            Some(AcceptedBy::Phase)
        } else if max_error(thetas, targets, beta, n) < epsilon {
            Some(AcceptedBy::Residual)
        } else {
            None
        }
    };

    let hit = (1..=n_max).into_par_iter().find_first(|&n| check(n).is_some());
    if let Some(n) = hit {
        return Ok(SearchOutcome::Found {
            n,
            w: beta,
            max_error: max_error(thetas, targets, beta, n),
            accepted_by: check(n).expect("hit was accepted"),
        });
    }
    let (best_error, best_n) = (1..=n_max)
        .into_par_iter()
        .map(|n| (max_error(thetas, targets, beta, n), n))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("range is non-empty");
    Ok(SearchOutcome::NotFound {
        w: beta,
        best_n,
        best_error,
    })
}

/// Exact rational angle `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("rational with zero denominator"));
        }
        let g = num.gcd(&den);
        let sign = den.signum();
        Ok(Self {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    /// Least common denominator `s`.
    pub common_denominator: u64,
    /// Smallest period of `n ↦ (ψ_n(x_1), …, ψ_n(x_M))`; divides `s`.
    pub period: u64,
    /// Distinct value tuples in order of first appearance for `n = 1, 2, …`.
    pub tuples: Vec<Vec<f64>>,
    /// `min over tuples, w of max_i |w ψ_i − g_i|`, when targets are given.
    pub error_floor: Option<f64>,
    pub best_weight: Option<f64>,
}

/// Reduced phase `min(r, den − r) / den` of `n θ` modulo 1; equal keys give
/// bit-identical cosines.
fn phase_key(theta: Rational, n: u64) -> (i64, i64) {
    let den = theta.den as i128;
    let r = ((n as i128 * theta.num as i128).rem_euclid(den)) as i64;
    let k = r.min(theta.den - r);
    let g = k.gcd(&theta.den);
    (k / g, theta.den / g)
}

/// Enumerates the value tuples of the sequential basis over one period of
/// rational angles and, with targets, the best achievable uniform error.
pub fn counterexample_enumerate(thetas: &[Rational], targets: Option<&[f64]>) -> Result<CounterexampleReport> {
    if thetas.is_empty() {
        return Err(Error::domain("need at least one rational angle"));
    }
    let thetas: Vec<Rational> = thetas
        .iter()
        .map(|t| Rational::new(t.num, t.den))
        .collect::<Result<_>>()?;
    if let Some(g) = targets {
        if g.len() != thetas.len() {
            return Err(Error::Shape {
                what: "targets",
                expected: thetas.len(),
                found: g.len(),
            });
        }
    }
    let s = thetas.iter().fold(1i64, |acc, t| acc.lcm(&t.den));
    let s_u = u64::try_from(s).map_err(|_| Error::domain("common denominator overflow"))?;
    if s_u > 1 << 24 {
        return Err(Error::domain(format!("common denominator {s_u} too large to enumerate")));
    }

    let keys: Vec<Vec<(i64, i64)>> = (1..=s_u)
        .map(|n| thetas.iter().map(|&t| phase_key(t, n)).collect())
        .collect();
    let len = keys.len();
    let period = (1..=s_u)
        .filter(|p| s_u % p == 0)
        .find(|&p| (0..len).all(|i| keys[i] == keys[(i + p as usize) % len]))
        .expect("s itself is a period");

    let mut seen = HashSet::new();
    let tuples: Vec<Vec<f64>> = keys
        .iter()
        .filter(|k| seen.insert((*k).clone()))
        .map(|k| k.iter().map(|&(a, b)| (TAU * a as f64 / b as f64).cos()).collect())
        .collect();

    let (error_floor, best_weight) = match targets {
        Some(g) => {
            let (e, w) = tuples
                .iter()
                .map(|v| chebyshev_floor(v, g))
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .expect("at least one tuple");
            (Some(e), Some(w))
        }
        None => (None, None),
    };

    Ok(CounterexampleReport {
        common_denominator: s_u,
        period,
        tuples,
        error_floor,
        best_weight,
    })
}

/// `min_w max_i |w v_i − g_i|`; returns `(error, w)`.
///
/// The objective is convex and piecewise linear in `w`, so its minimum lies
/// where two pieces cross or where one piece vanishes.
pub fn chebyshev_floor(v: &[f64], g: &[f64]) -> (f64, f64) {
    let objective = |w: f64| v.iter().zip(g).fold(0.0f64, |m, (vi, gi)| m.max((w * vi - gi).abs()));
    let mut candidates = vec![0.0];
    for i in 0..v.len() {
        if v[i] != 0.0 {
            candidates.push(g[i] / v[i]);
        }
        for j in i + 1..v.len() {
            if v[i] != v[j] {
                candidates.push((g[i] - g[j]) / (v[i] - v[j]));
            }
            if v[i] != -v[j] {
                candidates.push((g[i] + g[j]) / (v[i] + v[j]));
            }
        }
    }
    candidates
        .into_iter()
        .map(|w| (objective(w), w))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("candidate list is non-empty")
}
