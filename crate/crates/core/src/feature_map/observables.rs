//! Observable indices for the parallel scenario.
//!
//! `AlphaIndex` selects `O_α = Z^{α_1} ⊗ … ⊗ Z^{α_N}`; `MultiDegree` selects the
//! projector observable whose basis function is a Bernstein monomial.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{Factor, ProductObservable};

/// Binary vector `α ∈ {0,1}^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct AlphaIndex(Vec<u8>);

impl AlphaIndex {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::domain(format!("alpha entry {b} is not 0 or 1")));
        }
        Ok(Self(bits))
    }

    pub fn zeros(n_qubits: usize) -> Self {
        Self(vec![0; n_qubits])
    }

    /// The `index`-th vector in little-endian binary order (bit `q` of `index`
    /// is `α_q`).
    pub fn from_index(n_qubits: usize, index: u64) -> Self {
        Self((0..n_qubits).map(|q| ((index >> q) & 1) as u8).collect())
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// |α| = Σ α_i.
    pub fn weight(&self) -> usize {
        self.0.iter().map(|&b| b as usize).sum()
    }

    /// Nonzero count per residue class `q mod d`.
    pub fn residue_counts(&self, d: usize) -> Vec<usize> {
        let mut counts = vec![0; d];
        for (q, &b) in self.0.iter().enumerate() {
            counts[q % d] += b as usize;
        }
        counts
    }

    pub fn observable(&self) -> ProductObservable {
        ProductObservable::new(
            self.0
                .iter()
                .map(|&b| if b == 1 { Factor::PauliZ } else { Factor::Identity })
                .collect(),
        )
    }
}

impl TryFrom<Vec<u8>> for AlphaIndex {
    type Error = Error;

    fn try_from(bits: Vec<u8>) -> Result<Self> {
        Self::new(bits)
    }
}

impl From<AlphaIndex> for Vec<u8> {
    fn from(a: AlphaIndex) -> Self {
        a.0
    }
}

/// Number of qubits carrying coordinate `k` (0-based) when `N` qubits are
/// assigned cyclically to `d` coordinates: `⌈(N - k) / d⌉`.
pub fn slots_per_residue(n_qubits: usize, d: usize) -> Vec<usize> {
    (0..d).map(|k| (n_qubits.saturating_sub(k)).div_ceil(d)).collect()
}

/// Upper bound `(2 + ⌊(N-1)/d⌋)^d` on the number of distinct observables.
pub fn observable_count_bound(n_qubits: usize, d: usize) -> u128 {
    let q = 2 + (n_qubits.saturating_sub(1) / d) as u128;
    q.pow(d as u32)
}

/// One representative per class of `α` with equal per-residue nonzero counts.
///
/// For per-residue counts `(p_1, …, p_d)` the representative sets the first
/// `p_k` slots of residue class `k`, i.e. the nonzero entries are packed at the
/// lowest qubit indices of each class. The list is ordered with `p_1` varying
/// fastest.
pub fn enumerate_observables_dedup(n_qubits: usize, d: usize) -> Result<Vec<AlphaIndex>> {
    if d == 0 || n_qubits < d {
        return Err(Error::domain(format!("need N >= d >= 1, got N={n_qubits}, d={d}")));
    }
    let slots = slots_per_residue(n_qubits, d);
    let reps = multi_indices(&slots)
        .map(|counts| {
            let mut bits = vec![0u8; n_qubits];
            for (k, &p) in counts.iter().enumerate() {
                for slot in 0..p {
                    bits[k + slot * d] = 1;
                }
            }
            AlphaIndex(bits)
        })
        .collect();
    Ok(reps)
}

/// All integer vectors `c` with `0 <= c[i] <= upper[i]`, first coordinate
/// varying fastest.
pub(crate) fn multi_indices(upper: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = upper.iter().map(|u| u + 1).product();
    (0..total).map(move |mut flat| {
        upper
            .iter()
            .map(|u| {
                let c = flat % (u + 1);
                flat /= u + 1;
                c
            })
            .collect()
    })
}

/// Multi-degree `p = (p_1, …, p_d)` with `0 <= p_i <= n`, addressing the
/// Bernstein term `∏ x_i^{p_i} (1 - x_i)^{n - p_i}` on `N = n·d` qubits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiDegree {
    pub p: Vec<usize>,
    pub n: usize,
}

impl MultiDegree {
    pub fn new(p: Vec<usize>, n: usize) -> Result<Self> {
        if let Some(&bad) = p.iter().find(|&&pi| pi > n) {
            return Err(Error::domain(format!("degree entry {bad} exceeds n = {n}")));
        }
        Ok(Self { p, n })
    }

    pub fn d(&self) -> usize {
        self.p.len()
    }

    /// All `(n+1)^d` multi-degrees, `p_1` varying fastest. The position in this
    /// list is the flat sample index used by the Bernstein approximator.
    pub fn all(d: usize, n: usize) -> Vec<MultiDegree> {
        let upper = vec![n; d];
        multi_indices(&upper).map(|p| MultiDegree { p, n }).collect()
    }

    /// Projector observable `A_1 ⊗ … ⊗ A_N`: qubit `i + k·d` carries
    /// `(I+Z)/2` when `k < p_i` and `(I-Z)/2` otherwise.
    pub fn projector_observable(&self) -> ProductObservable {
        let d = self.d();
        let mut factors = vec![Factor::ProjMinus; self.n * d];
        for (i, &pi) in self.p.iter().enumerate() {
            for k in 0..pi {
                factors[i + k * d] = Factor::ProjPlus;
            }
        }
        ProductObservable::new(factors)
    }

    /// `∏ x_i^{p_i} (1 - x_i)^{n - p_i}`.
    pub fn monomial(&self, x: &[f64]) -> f64 {
        self.p
            .iter()
            .zip(x)
            .map(|(&pi, &xi)| xi.powi(pi as i32) * (1.0 - xi).powi((self.n - pi) as i32))
            .product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    // Brute force: group all 2^N alphas by residue counts.
    fn brute_force_classes(n_qubits: usize, d: usize) -> BTreeSet<Vec<usize>> {
        (0..1u64 << n_qubits)
            .map(|i| AlphaIndex::from_index(n_qubits, i).residue_counts(d))
            .collect()
    }

    #[test]
    fn single_qubit_has_two_classes() {
        let reps = enumerate_observables_dedup(1, 1).unwrap();
        assert_eq!(reps, vec![AlphaIndex(vec![0]), AlphaIndex(vec![1])]);
    }

    #[test]
    fn six_qubits_two_dims() {
        let reps = enumerate_observables_dedup(6, 2).unwrap();
        assert_eq!(reps.len(), 16);
        assert_eq!(brute_force_classes(6, 2).len(), 16);
        assert_eq!(observable_count_bound(6, 2), 16);
    }

    #[test]
    fn representatives_cover_every_class_once() {
        for d in 1..=3 {
            for n in d..=9 {
                let reps = enumerate_observables_dedup(n, d).unwrap();
                let classes: BTreeSet<_> = reps.iter().map(|a| a.residue_counts(d)).collect();
                assert_eq!(classes.len(), reps.len());
                assert_eq!(classes, brute_force_classes(n, d));
                assert!(reps.len() as u128 <= observable_count_bound(n, d));
            }
        }
    }

    #[test]
    fn representative_packs_lowest_slots() {
        let reps = enumerate_observables_dedup(6, 2).unwrap();
        // p = (2, 1): residue 0 slots {0, 2}, residue 1 slot {1}.
        let rep = reps.iter().find(|a| a.residue_counts(2) == vec![2, 1]).unwrap();
        assert_eq!(rep.bits(), &[1, 1, 1, 0, 0, 0]);
    }

    #[test]
    fn invalid_sizes_rejected() {
        assert!(enumerate_observables_dedup(1, 2).is_err());
        assert!(enumerate_observables_dedup(3, 0).is_err());
        assert!(AlphaIndex::new(vec![0, 2]).is_err());
        assert!(MultiDegree::new(vec![5], 4).is_err());
    }

    #[test]
    fn projector_layout() {
        let p = MultiDegree::new(vec![1, 2], 3).unwrap();
        use Factor::*;
        assert_eq!(
            p.projector_observable().factors,
            vec![ProjPlus, ProjPlus, ProjMinus, ProjPlus, ProjMinus, ProjMinus]
        );
    }

    #[test]
    fn multidegree_order_first_fastest() {
        let all = MultiDegree::all(2, 1);
        let ps: Vec<_> = all.into_iter().map(|m| m.p).collect();
        assert_eq!(ps, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
    }
}
