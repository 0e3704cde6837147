use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Uniform random probes added to the grid.
pub const RANDOM_PROBES: usize = 1000;

/// Grid resolution per dimension.
pub fn grid_points_per_dim(d: usize) -> usize {
    match d {
        1 => 1001,
        2 => 101,
        3 => 41,
        _ => 11,
    }
}

/// Uniform tensor grid on `[0, 1]^d` with `k` points per axis, first
/// coordinate varying fastest.
pub fn grid_points(d: usize, k: usize) -> Vec<Vec<f64>> {
    let axis: Vec<f64> = (0..k).map(|i| if k == 1 { 0.5 } else { i as f64 / (k - 1) as f64 }).collect();
    let total = k.pow(d as u32);
    (0..total)
        .map(|mut flat| {
            (0..d)
                .map(|_| {
                    let v = axis[flat % k];
                    flat /= k;
                    v
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupErrorReport {
    pub max_error: f64,
    pub argmax: Vec<f64>,
    pub n_points: usize,
}

/// Estimates `sup_x |f(x) - g(x)|` over the grid plus [`RANDOM_PROBES`]
/// seeded uniform points. The reduction keeps the first maximal point so the
/// result does not depend on thread scheduling.
pub fn sup_error<F, G>(d: usize, seed: u64, f: F, g: G) -> Result<SupErrorReport>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
    G: Fn(&[f64]) -> f64 + Sync,
{
    if d == 0 {
        return Err(Error::domain("dimension must be >= 1"));
    }
    let mut points = grid_points(d, grid_points_per_dim(d));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    points.extend((0..RANDOM_PROBES).map(|_| (0..d).map(|_| rng.gen::<f64>()).collect::<Vec<_>>()));
    let errors: Vec<f64> = points
        .par_iter()
        .map(|x| Ok((f(x)? - g(x)).abs()))
        .collect::<Result<_>>()?;
    let (idx, max_error) = errors
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, e)| if e > best.1 { (i, e) } else { best });
    Ok(SupErrorReport {
        max_error,
        argmax: points.swap_remove(idx),
        n_points: errors.len(),
    })
}
