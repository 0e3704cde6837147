//! Quantum feature maps and their basis functions.
//!
//! Three encodings are supported:
//!
//! - `PARALLEL_ARCCOS`: qubit `j` is rotated by `arccos(√x_{[j]})`, where
//!   `[j] = j mod d` assigns coordinates to qubits cyclically.
//! - `PARALLEL_ACTIVATION`: qubit `j` is rotated by
//!   `arccos(√((1 + σ(a_j·x + b_j)) / 2))` with seeded random `(a_j, b_j)`.
//! - `SEQUENTIAL`: a single qubit rotated `n` times by `π θ(x)` over a finite
//!   input set whose points are identified by index.
//!
//! Every basis function has a closed form (the default) and an oracle path
//! through [`crate::statevector`].

mod activation;
mod closed_form;
mod observables;

pub use activation::{ActivationKind, ActivationSpec, SAMPLING_HALF_WIDTH};
pub use closed_form::{basis_activation_closed, basis_parallel_closed, basis_sequential_closed, frac};
pub use observables::{
    enumerate_observables_dedup, observable_count_bound, slots_per_residue, AlphaIndex, MultiDegree,
};
pub(crate) use observables::multi_indices;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{expectation, inner_product, ProductObservable, QubitState};
use crate::tolerances::MAX_QUBITS;
use closed_form::check_unit_cube;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Variant {
    ParallelArccos,
    ParallelActivation,
    Sequential,
}

/// How a basis function is evaluated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Evaluation {
    #[default]
    ClosedForm,
    /// Encode on the statevector simulator and measure the observable.
    Oracle,
}

/// Which basis function a design-matrix column holds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisLabel {
    /// `O_α` on a parallel map.
    Alpha(AlphaIndex),
    /// `Z` on qubit `j` of a parallel map.
    Qubit(usize),
    /// Bernstein projector observable `O_p`.
    Degree(MultiDegree),
    /// `Z` after `n` sequential repetitions.
    Iteration(u64),
}

/// A validated feature map. Serializes as
/// `{variant, d, N, activation: {kind, seed}, theta_values}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FeatureMapRecord", into = "FeatureMapRecord")]
pub struct FeatureMapSpec {
    variant: Variant,
    d: usize,
    n_qubits: usize,
    activation: Option<ActivationSpec>,
    theta_values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FeatureMapRecord {
    variant: Variant,
    #[serde(default = "one")]
    d: usize,
    #[serde(rename = "N", default = "one")]
    n_qubits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    activation: Option<ActivationRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta_values: Option<Vec<f64>>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActivationRecord {
    kind: ActivationKind,
    seed: u64,
}

impl TryFrom<FeatureMapRecord> for FeatureMapSpec {
    type Error = Error;

    fn try_from(r: FeatureMapRecord) -> Result<Self> {
        match r.variant {
            Variant::ParallelArccos => {
                if r.activation.is_some() || r.theta_values.is_some() {
                    return Err(Error::config("PARALLEL_ARCCOS takes neither activation nor theta_values"));
                }
                Self::parallel_arccos(r.d, r.n_qubits)
            }
            Variant::ParallelActivation => {
                let act = r
                    .activation
                    .ok_or_else(|| Error::config("PARALLEL_ACTIVATION requires an activation"))?;
                if r.theta_values.is_some() {
                    return Err(Error::config("PARALLEL_ACTIVATION takes no theta_values"));
                }
                Self::parallel_activation(r.d, r.n_qubits, act.kind, act.seed)
            }
            Variant::Sequential => {
                if r.activation.is_some() {
                    return Err(Error::config("SEQUENTIAL takes no activation"));
                }
                if r.n_qubits != 1 {
                    return Err(Error::config("SEQUENTIAL operates on exactly one qubit"));
                }
                let mut spec = Self::sequential(r.theta_values.unwrap_or_default())?;
                spec.d = r.d;
                Ok(spec)
            }
        }
    }
}

impl From<FeatureMapSpec> for FeatureMapRecord {
    fn from(s: FeatureMapSpec) -> Self {
        FeatureMapRecord {
            variant: s.variant,
            d: s.d,
            n_qubits: s.n_qubits,
            activation: s.activation.map(|a| ActivationRecord {
                kind: a.kind(),
                seed: a.seed(),
            }),
            theta_values: (s.variant == Variant::Sequential).then_some(s.theta_values),
        }
    }
}

impl FeatureMapSpec {
    pub fn parallel_arccos(d: usize, n_qubits: usize) -> Result<Self> {
        if d == 0 || n_qubits < d {
            return Err(Error::config(format!("PARALLEL_ARCCOS needs N >= d >= 1 (N={n_qubits}, d={d})")));
        }
        Ok(Self {
            variant: Variant::ParallelArccos,
            d,
            n_qubits,
            activation: None,
            theta_values: Vec::new(),
        })
    }

    pub fn parallel_activation(d: usize, n_qubits: usize, kind: ActivationKind, seed: u64) -> Result<Self> {
        Self::with_activation(d, ActivationSpec::from_seed(kind, seed, d, n_qubits))
    }

    /// Parallel activation map with explicit parameters; `N` is the number of
    /// `(a_j, b_j)` pairs.
    pub fn with_activation(d: usize, activation: ActivationSpec) -> Result<Self> {
        let n_qubits = activation.n_qubits();
        if d == 0 || n_qubits == 0 {
            return Err(Error::config("PARALLEL_ACTIVATION needs N >= 1 and d >= 1"));
        }
        if activation.weights().iter().any(|a| a.len() != d) {
            return Err(Error::config("activation weight length differs from d"));
        }
        Ok(Self {
            variant: Variant::ParallelActivation,
            d,
            n_qubits,
            activation: Some(activation),
            theta_values: Vec::new(),
        })
    }

    pub fn sequential(theta_values: Vec<f64>) -> Result<Self> {
        if theta_values.is_empty() {
            return Err(Error::config("SEQUENTIAL needs at least one theta value"));
        }
        if theta_values.iter().any(|t| !t.is_finite()) {
            return Err(Error::config("theta values must be finite"));
        }
        Ok(Self {
            variant: Variant::Sequential,
            d: 1,
            n_qubits: 1,
            activation: None,
            theta_values,
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn activation(&self) -> Option<&ActivationSpec> {
        self.activation.as_ref()
    }

    pub fn theta_values(&self) -> &[f64] {
        &self.theta_values
    }

    fn is_parallel(&self) -> bool {
        self.variant != Variant::Sequential
    }

    fn require_parallel(&self) -> Result<()> {
        if self.is_parallel() {
            Ok(())
        } else {
            Err(Error::config("operation needs a parallel feature map"))
        }
    }

    fn require_sequential(&self) -> Result<()> {
        if self.is_parallel() {
            Err(Error::config("operation needs a SEQUENTIAL feature map"))
        } else {
            Ok(())
        }
    }

    /// Per-qubit Y-rotation angles `θ_j(x)` of a parallel map.
    pub fn angles(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.require_parallel()?;
        match &self.activation {
            None => {
                check_unit_cube(x, self.d)?;
                Ok((0..self.n_qubits).map(|j| x[j % self.d].sqrt().acos()).collect())
            }
            Some(act) => {
                if x.len() != self.d {
                    return Err(Error::Shape {
                        what: "input vector",
                        expected: self.d,
                        found: x.len(),
                    });
                }
                (0..self.n_qubits)
                    .map(|j| {
                        let s = basis_activation_closed(x, j, act)?;
                        Ok(((1.0 + s) / 2.0).sqrt().acos())
                    })
                    .collect()
            }
        }
    }

    /// `V(x)|0…0⟩` for a parallel map.
    pub fn encode(&self, x: &[f64]) -> Result<QubitState> {
        self.require_parallel()?;
        if self.n_qubits > MAX_QUBITS {
            return Err(Error::Capacity {
                requested: self.n_qubits,
                max: MAX_QUBITS,
            });
        }
        QubitState::product_y(&self.angles(x)?)
    }

    fn theta(&self, point: usize) -> Result<f64> {
        self.require_sequential()?;
        self.theta_values.get(point).copied().ok_or_else(|| {
            Error::domain(format!(
                "point {point} outside the finite input set of {} points",
                self.theta_values.len()
            ))
        })
    }

    /// `V^n(x_point)|0⟩ = e^{-i n π θ Y}|0⟩` for the sequential map.
    pub fn encode_sequential(&self, point: usize, repetitions: u64) -> Result<QubitState> {
        let theta = self.theta(point)?;
        QubitState::product_y(&[PI * repetitions as f64 * theta])
    }

    /// Sequential state built by applying `V(x_point)` `repetitions` times.
    pub fn encode_sequential_repeated(&self, point: usize, repetitions: u64) -> Result<QubitState> {
        let theta = self.theta(point)?;
        let mut state = QubitState::zero(1)?;
        for _ in 0..repetitions {
            state.rotate_y_in_place(0, PI * theta)?;
        }
        Ok(state)
    }

    /// Observable for `label` on this map's register.
    pub fn observable(&self, label: &BasisLabel) -> Result<ProductObservable> {
        match label {
            BasisLabel::Alpha(a) => {
                self.check_label_len(a.len())?;
                Ok(a.observable())
            }
            BasisLabel::Qubit(j) => {
                if *j >= self.n_qubits {
                    return Err(Error::IndexOutOfRange {
                        index: *j,
                        len: self.n_qubits,
                    });
                }
                Ok(ProductObservable::z_at(self.n_qubits, *j))
            }
            BasisLabel::Degree(p) => {
                self.check_label_len(p.n * p.d())?;
                Ok(p.projector_observable())
            }
            BasisLabel::Iteration(_) => Ok(ProductObservable::z_at(1, 0)),
        }
    }

    fn check_label_len(&self, len: usize) -> Result<()> {
        if len != self.n_qubits {
            return Err(Error::Shape {
                what: "observable length",
                expected: self.n_qubits,
                found: len,
            });
        }
        Ok(())
    }

    /// Basis function `label` at `x` on a parallel map.
    pub fn basis_value(&self, label: &BasisLabel, x: &[f64], mode: Evaluation) -> Result<f64> {
        self.require_parallel()?;
        match mode {
            Evaluation::Oracle => expectation(&self.encode(x)?, &self.observable(label)?),
            Evaluation::ClosedForm => match (label, &self.activation) {
                (BasisLabel::Alpha(a), None) => {
                    self.check_label_len(a.len())?;
                    basis_parallel_closed(x, a, self.d)
                }
                (BasisLabel::Degree(p), None) => {
                    self.check_label_len(p.n * p.d())?;
                    if p.d() != self.d {
                        return Err(Error::Shape {
                            what: "multi-degree dimension",
                            expected: self.d,
                            found: p.d(),
                        });
                    }
                    check_unit_cube(x, self.d)?;
                    Ok(p.monomial(x))
                }
                (BasisLabel::Qubit(j), None) => {
                    check_unit_cube(x, self.d)?;
                    if *j >= self.n_qubits {
                        return Err(Error::IndexOutOfRange {
                            index: *j,
                            len: self.n_qubits,
                        });
                    }
                    Ok(2.0 * x[j % self.d] - 1.0)
                }
                (BasisLabel::Qubit(j), Some(act)) => basis_activation_closed(x, *j, act),
                (BasisLabel::Alpha(a), Some(_)) => {
                    // Product of the per-qubit Z expectations cos(2θ_j) = σ_j(x).
                    self.check_label_len(a.len())?;
                    let angles = self.angles(x)?;
                    Ok(a.bits()
                        .iter()
                        .zip(&angles)
                        .filter(|(&b, _)| b == 1)
                        .map(|(_, t)| (2.0 * t).cos())
                        .product())
                }
                (BasisLabel::Degree(_), Some(_)) => Err(Error::config(
                    "projector observables are defined for PARALLEL_ARCCOS only",
                )),
                (BasisLabel::Iteration(_), _) => Err(Error::config("iteration labels need a SEQUENTIAL map")),
            },
        }
    }

    /// `ψ_n(x_point)` for the sequential map. The oracle applies `V` `n` times.
    pub fn sequential_value(&self, point: usize, n: u64, mode: Evaluation) -> Result<f64> {
        let theta = self.theta(point)?;
        match mode {
            Evaluation::ClosedForm => Ok(basis_sequential_closed(theta, n)),
            Evaluation::Oracle => expectation(
                &self.encode_sequential_repeated(point, n)?,
                &ProductObservable::z_at(1, 0),
            ),
        }
    }

    /// `κ(x, x') = Re⟨Ψ(x)|Ψ(x')⟩ = ∏_j cos(θ_j(x) - θ_j(x'))` on a parallel map.
    pub fn kernel(&self, x: &[f64], x2: &[f64], mode: Evaluation) -> Result<f64> {
        match mode {
            Evaluation::ClosedForm => {
                let a = self.angles(x)?;
                let b = self.angles(x2)?;
                Ok(a.iter().zip(&b).map(|(s, t)| (s - t).cos()).product())
            }
            Evaluation::Oracle => Ok(inner_product(&self.encode(x)?, &self.encode(x2)?)?.re),
        }
    }

    /// Kernel between two points of the sequential input set after `n`
    /// repetitions: `cos(π n (θ_i - θ_k))`.
    pub fn kernel_sequential(&self, i: usize, k: usize, n: u64, mode: Evaluation) -> Result<f64> {
        match mode {
            Evaluation::ClosedForm => {
                let (a, b) = (self.theta(i)?, self.theta(k)?);
                Ok((PI * n as f64 * a - PI * n as f64 * b).cos())
            }
            Evaluation::Oracle => Ok(inner_product(
                &self.encode_sequential(i, n)?,
                &self.encode_sequential(k, n)?,
            )?
            .re),
        }
    }

    /// Default basis for least-squares fitting: the deduplicated `O_α` set for
    /// `PARALLEL_ARCCOS`, the `N` single-qubit `Z` observables for
    /// `PARALLEL_ACTIVATION`.
    pub fn default_labels(&self) -> Result<Vec<BasisLabel>> {
        match self.variant {
            Variant::ParallelArccos => Ok(enumerate_observables_dedup(self.n_qubits, self.d)?
                .into_iter()
                .map(BasisLabel::Alpha)
                .collect()),
            Variant::ParallelActivation => Ok((0..self.n_qubits).map(BasisLabel::Qubit).collect()),
            Variant::Sequential => Err(Error::config("SEQUENTIAL maps have no fixed least-squares basis")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn encode_single_qubit() {
        let spec = FeatureMapSpec::parallel_arccos(1, 1).unwrap();
        let s = spec.encode(&[0.25]).unwrap();
        let (t_sin, t_cos) = 0.5f64.acos().sin_cos();
        assert_abs_diff_eq!(s.amplitudes()[0].re, t_cos, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[0].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, t_sin, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, 0.75f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn encode_ones_is_all_zero_state() {
        for d in 1..=3 {
            let spec = FeatureMapSpec::parallel_arccos(d, 2 * d + 1).unwrap();
            let s = spec.encode(&vec![1.0; d]).unwrap();
            assert_eq!(s, QubitState::zero(2 * d + 1).unwrap());
        }
    }

    #[test]
    fn cyclic_assignment() {
        // d=2, N=4, x=(0,1): 1-based qubits 1,3 read x_1=0 and flip.
        let spec = FeatureMapSpec::parallel_arccos(2, 4).unwrap();
        let s = spec.encode(&[0.0, 1.0]).unwrap();
        // Little-endian: 0-based qubits 0 and 2 set -> index 0b0101.
        assert_abs_diff_eq!(s.amplitudes()[0b0101].norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn encode_domain_errors() {
        let spec = FeatureMapSpec::parallel_arccos(2, 3).unwrap();
        assert!(matches!(spec.encode(&[0.5, 1.5]), Err(Error::Domain(_))));
        assert!(spec.encode(&[0.5]).is_err());
        let big = FeatureMapSpec::parallel_arccos(1, 23).unwrap();
        assert!(matches!(big.encode(&[0.5]), Err(Error::Capacity { .. })));
        // Closed forms still work beyond the register cap.
        let alpha = BasisLabel::Alpha(AlphaIndex::from_index(23, 3));
        assert_abs_diff_eq!(
            big.basis_value(&alpha, &[0.75], Evaluation::ClosedForm).unwrap(),
            0.25,
            epsilon = 1e-15
        );
        let seq = FeatureMapSpec::sequential(vec![0.1]).unwrap();
        assert!(seq.encode_sequential(1, 3).is_err());
        assert!(FeatureMapSpec::parallel_arccos(3, 2).is_err());
        assert!(FeatureMapSpec::sequential(vec![]).is_err());
    }

    #[test]
    fn tanh_oracle_through_encoding() {
        let act = ActivationSpec::with_parameters(ActivationKind::Tanh, vec![vec![1.0]], vec![0.0]).unwrap();
        let spec = FeatureMapSpec::with_activation(1, act).unwrap();
        let oracle = spec
            .basis_value(&BasisLabel::Qubit(0), &[0.5], Evaluation::Oracle)
            .unwrap();
        assert_abs_diff_eq!(oracle, 0.5f64.tanh(), epsilon = 1e-12);
    }

    #[test]
    fn sequential_oracle_repeated_rotations() {
        let spec = FeatureMapSpec::sequential(vec![2f64.sqrt()]).unwrap();
        let oracle = spec.sequential_value(0, 3, Evaluation::Oracle).unwrap();
        assert_abs_diff_eq!(oracle, 0.04622345048927888, epsilon = 1e-10);
        let closed = spec.sequential_value(0, 3, Evaluation::ClosedForm).unwrap();
        assert_abs_diff_eq!(oracle, closed, epsilon = 1e-10);
    }

    #[test]
    fn kernel_examples() {
        let spec = FeatureMapSpec::parallel_arccos(1, 1).unwrap();
        assert_abs_diff_eq!(spec.kernel(&[0.3], &[0.3], Evaluation::ClosedForm).unwrap(), 1.0);
        assert_abs_diff_eq!(
            spec.kernel(&[0.0], &[1.0], Evaluation::ClosedForm).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        let expected = (0.5f64.acos() - 0.75f64.sqrt().acos()).cos();
        assert_abs_diff_eq!(expected, 0.8660254037844386, epsilon = 1e-15);
        for mode in [Evaluation::ClosedForm, Evaluation::Oracle] {
            assert_abs_diff_eq!(spec.kernel(&[0.25], &[0.75], mode).unwrap(), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn json_round_trip_and_field_names() {
        let spec = FeatureMapSpec::parallel_activation(2, 5, ActivationKind::Cosine, 9).unwrap();
        let json = serde_json::to_value(&spec).unwrap();
        assert_eq!(json["variant"], "PARALLEL_ACTIVATION");
        assert_eq!(json["N"], 5);
        assert_eq!(json["activation"]["kind"], "COSINE");
        assert_eq!(json["activation"]["seed"], 9);
        let back: FeatureMapSpec = serde_json::from_value(json).unwrap();
        assert_eq!(back, spec);

        let seq: FeatureMapSpec =
            serde_json::from_str(r#"{"variant":"SEQUENTIAL","theta_values":[0.5,0.25]}"#).unwrap();
        assert_eq!(seq.theta_values(), &[0.5, 0.25]);
        assert!(serde_json::from_str::<FeatureMapSpec>(r#"{"variant":"PARALLEL_ARCCOS","d":3,"N":2}"#).is_err());
        assert!(serde_json::from_str::<FeatureMapSpec>(r#"{"variant":"PARALLEL_ACTIVATION","d":1,"N":2}"#).is_err());
    }

    fn random_case(rng: &mut ChaCha8Rng) -> (FeatureMapSpec, BasisLabel, Vec<f64>) {
        let d = rng.gen_range(1..=3);
        let n = rng.gen_range(d..=8);
        let x: Vec<f64> = (0..d).map(|_| rng.gen()).collect();
        if rng.gen_bool(0.5) {
            let spec = FeatureMapSpec::parallel_arccos(d, n).unwrap();
            let label = BasisLabel::Alpha(AlphaIndex::from_index(n, rng.gen_range(0..1 << n)));
            (spec, label, x)
        } else {
            let kind = [ActivationKind::Tanh, ActivationKind::Cosine, ActivationKind::PiecewiseSign]
                [rng.gen_range(0..3)];
            let spec = FeatureMapSpec::parallel_activation(d, n, kind, rng.gen()).unwrap();
            let label = BasisLabel::Qubit(rng.gen_range(0..n));
            (spec, label, x)
        }
    }

    #[test]
    fn closed_form_matches_oracle_and_stays_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..1000 {
            let (spec, label, x) = random_case(&mut rng);
            let closed = spec.basis_value(&label, &x, Evaluation::ClosedForm).unwrap();
            let oracle = spec.basis_value(&label, &x, Evaluation::Oracle).unwrap();
            assert!((closed - oracle).abs() < 1e-10, "{label:?} at {x:?}: {closed} vs {oracle}");
            assert!((-1.0..=1.0).contains(&closed));
        }
    }

    #[test]
    fn dedup_classes_share_basis_function() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 1..=3 {
            for n in d..=8 {
                let points: Vec<Vec<f64>> = (0..20).map(|_| (0..d).map(|_| rng.gen()).collect()).collect();
                let mut by_class = std::collections::HashMap::<Vec<usize>, Vec<f64>>::new();
                for idx in 0..1u64 << n {
                    let alpha = AlphaIndex::from_index(n, idx);
                    let values: Vec<f64> = points
                        .iter()
                        .map(|x| basis_parallel_closed(x, &alpha, d).unwrap())
                        .collect();
                    let entry = by_class.entry(alpha.residue_counts(d)).or_insert_with(|| values.clone());
                    for (a, b) in entry.iter().zip(&values) {
                        assert!((a - b).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn gram_matrices_are_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let specs = [
            FeatureMapSpec::parallel_arccos(2, 5).unwrap(),
            FeatureMapSpec::parallel_activation(2, 6, ActivationKind::Tanh, 4).unwrap(),
        ];
        for spec in &specs {
            let pts: Vec<Vec<f64>> = (0..20).map(|_| vec![rng.gen(), rng.gen()]).collect();
            let gram = DMatrix::from_fn(20, 20, |i, k| {
                spec.kernel(&pts[i], &pts[k], Evaluation::ClosedForm).unwrap()
            });
            assert!((&gram - gram.transpose()).amax() < 1e-12);
            let min_eig = gram.symmetric_eigenvalues().min();
            assert!(min_eig >= -1e-9, "min eigenvalue {min_eig}");
        }
    }

    proptest! {
        #[test]
        fn sequential_rational_period(
            (s, nums) in (1u64..12).prop_flat_map(|s| (Just(s), prop::collection::vec(0u64..40, 1..5))),
            n in 1u64..200,
        ) {
            let thetas: Vec<f64> = nums.iter().map(|&k| k as f64 / s as f64).collect();
            let spec = FeatureMapSpec::sequential(thetas).unwrap();
            for i in 0..nums.len() {
                let a = spec.sequential_value(i, n, Evaluation::ClosedForm).unwrap();
                let b = spec.sequential_value(i, n + s, Evaluation::ClosedForm).unwrap();
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        #[test]
        fn sequential_closed_matches_repeated_rotation(theta in -3.0f64..3.0, n in 1u64..64) {
            let spec = FeatureMapSpec::sequential(vec![theta]).unwrap();
            let closed = spec.sequential_value(0, n, Evaluation::ClosedForm).unwrap();
            let oracle = spec.sequential_value(0, n, Evaluation::Oracle).unwrap();
            prop_assert!((closed - oracle).abs() < 1e-10);
        }
    }
}
