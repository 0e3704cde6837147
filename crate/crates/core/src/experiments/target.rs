use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TargetKind {
    /// `Σ_t c_t ∏_i x_i^{p_{t,i}}`.
    Poly,
    /// `|x_axis − shift|`.
    AbsShift,
    /// `amplitude · cos(2π frequency Σ_i x_i + phase)`.
    Cos,
    /// Explicit `(x, g(x))` pairs; off-table points take the nearest entry.
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTerm {
    pub coefficient: f64,
    pub powers: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub x: Vec<f64>,
    pub g: f64,
}

/// Target function `g: [0, 1]^d → ℝ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub kind: TargetKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<PolyTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<TableEntry>,
    /// Euclidean Lipschitz constant; derived for POLY, ABS_SHIFT and COS when
    /// absent.
    #[serde(rename = "lipschitz_C", default, skip_serializing_if = "Option::is_none")]
    pub lipschitz_c: Option<f64>,
}

impl TargetSpec {
    fn empty(kind: TargetKind) -> Self {
        Self {
            kind,
            terms: Vec::new(),
            shift: None,
            axis: None,
            amplitude: None,
            frequency: None,
            phase: None,
            table: Vec::new(),
            lipschitz_c: None,
        }
    }

    pub fn abs_shift(shift: f64) -> Self {
        Self {
            shift: Some(shift),
            ..Self::empty(TargetKind::AbsShift)
        }
    }

    pub fn poly(terms: Vec<PolyTerm>) -> Self {
        Self {
            terms,
            ..Self::empty(TargetKind::Poly)
        }
    }

    /// Checks the parameters against dimension `d`.
    pub fn validate(&self, d: usize) -> Result<()> {
        match self.kind {
            TargetKind::Poly => {
                if self.terms.is_empty() {
                    return Err(Error::config("POLY target needs at least one term"));
                }
                if let Some(t) = self.terms.iter().find(|t| t.powers.len() != d) {
                    return Err(Error::config(format!(
                        "POLY term has {} powers but d = {d}",
                        t.powers.len()
                    )));
                }
            }
            TargetKind::AbsShift => {
                if self.axis.unwrap_or(0) >= d {
                    return Err(Error::config(format!("ABS_SHIFT axis must be below d = {d}")));
                }
            }
            TargetKind::Cos => {}
            TargetKind::Table => {
                if self.table.is_empty() {
                    return Err(Error::config("TABLE target requires explicit (x, g) pairs"));
                }
                if self.table.iter().any(|e| e.x.len() != d) {
                    return Err(Error::config(format!("TABLE entries must have d = {d} coordinates")));
                }
            }
        }
        if let Some(c) = self.lipschitz_c {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::config("lipschitz_C must be positive"));
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self.kind {
            TargetKind::Poly => self
                .terms
                .iter()
                .map(|t| t.coefficient * t.powers.iter().zip(x).map(|(&p, &v)| v.powi(p as i32)).product::<f64>())
                .sum(),
            TargetKind::AbsShift => (x[self.axis.unwrap_or(0)] - self.shift.unwrap_or(0.5)).abs(),
            TargetKind::Cos => {
                let s: f64 = x.iter().sum();
                self.amplitude.unwrap_or(1.0)
                    * (TAU * self.frequency.unwrap_or(1.0) * s + self.phase.unwrap_or(0.0)).cos()
            }
            TargetKind::Table => {
                let mut best = (f64::INFINITY, 0.0);
                for e in &self.table {
                    let d2: f64 = e.x.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                    if d2 < best.0 {
                        best = (d2, e.g);
                    }
                }
                best.1
            }
        }
    }

    /// Explicit `lipschitz_C`, else a valid bound on `[0, 1]^d`.
    pub fn lipschitz_constant(&self, d: usize) -> Option<f64> {
        if self.lipschitz_c.is_some() {
            return self.lipschitz_c;
        }
        match self.kind {
            // |∂_i x^p| <= p_i on the unit cube.
            TargetKind::Poly => {
                let c: f64 = self
                    .terms
                    .iter()
                    .map(|t| t.coefficient.abs() * t.powers.iter().map(|&p| (p * p) as f64).sum::<f64>().sqrt())
                    .sum();
                (c > 0.0).then_some(c)
            }
            TargetKind::AbsShift => Some(1.0),
            TargetKind::Cos => {
                let c = (self.amplitude.unwrap_or(1.0) * TAU * self.frequency.unwrap_or(1.0)).abs() * (d as f64).sqrt();
                (c > 0.0).then_some(c)
            }
            TargetKind::Table => None,
        }
    }

    /// True when the target is a polynomial whose per-variable degrees fit the
    /// given per-coordinate caps.
    pub fn is_poly_within(&self, caps: &[usize]) -> bool {
        self.kind == TargetKind::Poly
            && self
                .terms
                .iter()
                .all(|t| t.powers.iter().zip(caps).all(|(&p, &cap)| p as usize <= cap))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_evaluate() {
        let t: TargetSpec = serde_json::from_str(
            r#"{"kind":"POLY","terms":[{"coefficient":2.0,"powers":[2,1]},{"coefficient":-1.0,"powers":[0,0]}]}"#,
        )
        .unwrap();
        t.validate(2).unwrap();
        assert_eq!(t.eval(&[0.5, 0.5]), -0.75);
        assert!(t.validate(3).is_err());
        assert!(t.is_poly_within(&[2, 1]));
        assert!(!t.is_poly_within(&[1, 1]));

        let a: TargetSpec = serde_json::from_str(r#"{"kind":"ABS_SHIFT","shift":0.5,"lipschitz_C":1.0}"#).unwrap();
        assert_eq!(a.eval(&[0.2]), 0.3);
        assert_eq!(a.lipschitz_constant(1), Some(1.0));

        assert!(serde_json::from_str::<TargetSpec>(r#"{"kind":"COS","bogus":1}"#).is_err());
        let table: TargetSpec = serde_json::from_str(r#"{"kind":"TABLE"}"#).unwrap();
        assert!(table.validate(1).is_err());
    }

    #[test]
    fn table_nearest() {
        let t: TargetSpec =
            serde_json::from_str(r#"{"kind":"TABLE","table":[{"x":[0.0],"g":1.0},{"x":[1.0],"g":3.0}]}"#).unwrap();
        assert_eq!(t.eval(&[0.4]), 1.0);
        assert_eq!(t.eval(&[0.6]), 3.0);
        assert_eq!(t.lipschitz_constant(1), None);
    }
}
