use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bernstein::BernsteinApproximator;
use super::design::DesignMatrix;
use super::least_squares::fit_least_squares;
use super::sup_norm::grid_points;
use crate::error::{Error, Result};
use crate::feature_map::{Evaluation, FeatureMapSpec};

/// Labeled sample points of one region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub label: f64,
    pub points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FitBackend {
    Bernstein {
        n: usize,
    },
    /// Fits the map's default basis to the region points plus a
    /// `grid_per_dim^d` grid of extended labels.
    LeastSquares {
        feature_map: FeatureMapSpec,
        #[serde(default)]
        ridge_lambda: f64,
        #[serde(default = "default_ls_grid")]
        grid_per_dim: usize,
    },
}

fn default_ls_grid() -> usize {
    11
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    /// `½ min_{i≠j} |c_i − c_j|`.
    pub delta: f64,
    pub n_points: usize,
    pub n_separated: usize,
    pub accuracy: f64,
    pub per_region_accuracy: Vec<f64>,
    /// `max |f(x) − c|` over all region points.
    pub max_deviation: f64,
}

/// Label of the region owning the nearest sample point; ties go to the
/// lowest region index.
fn nearest_label(regions: &[Region], x: &[f64]) -> f64 {
    let mut best = (f64::INFINITY, 0.0);
    for r in regions {
        for p in &r.points {
            let d2: f64 = p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
            if d2 < best.0 {
                best = (d2, r.label);
            }
        }
    }
    best.1
}

fn validate(regions: &[Region]) -> Result<(usize, f64)> {
    let mut labels: Vec<f64> = regions.iter().map(|r| r.label).collect();
    labels.sort_by(f64::total_cmp);
    labels.dedup();
    if labels.len() < 2 {
        return Err(Error::config("classification needs at least two distinct labels"));
    }
    if labels.iter().any(|c| !c.is_finite()) {
        return Err(Error::config("labels must be finite"));
    }
    let delta = labels.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min) / 2.0;
    let d = regions
        .iter()
        .flat_map(|r| r.points.first())
        .map(Vec::len)
        .next()
        .ok_or_else(|| Error::config("regions contain no points"))?;
    for r in regions {
        if r.points.is_empty() {
            return Err(Error::config("every region needs at least one point"));
        }
        for p in &r.points {
            if p.len() != d {
                return Err(Error::Shape {
                    what: "region point",
                    expected: d,
                    found: p.len(),
                });
            }
            if p.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::domain("region points must lie in [0, 1]^d"));
            }
        }
    }
    Ok((d, delta))
}

type Predictor = Box<dyn Fn(&[f64]) -> Result<f64>>;

/// Fits a function extending the region labels and reports which region
/// points land within `δ` of their label.
pub fn classify_regions(regions: &[Region], backend: &FitBackend) -> Result<ClassificationReport> {
    let (d, delta) = validate(regions)?;
    let predict: Predictor = match backend {
        FitBackend::Bernstein { n } => {
            let b = BernsteinApproximator::from_fn(d, *n, |x| nearest_label(regions, x))?;
            Box::new(move |x| b.evaluate(x))
        }
        FitBackend::LeastSquares {
            feature_map,
            ridge_lambda,
            grid_per_dim,
        } => {
            if feature_map.d() != d {
                return Err(Error::Shape {
                    what: "feature map dimension",
                    expected: d,
                    found: feature_map.d(),
                });
            }
            let mut points: Vec<Vec<f64>> = regions.iter().flat_map(|r| r.points.iter().cloned()).collect();
            let mut targets: Vec<f64> = regions
                .iter()
                .flat_map(|r| std::iter::repeat_n(r.label, r.points.len()))
                .collect();
            for x in grid_points(d, *grid_per_dim) {
                targets.push(nearest_label(regions, &x));
                points.push(x);
            }
            let labels = feature_map.default_labels()?;
            let dm = DesignMatrix::build(feature_map, labels, points, Evaluation::ClosedForm)?;
            let model = fit_least_squares(&dm, &targets, *ridge_lambda)?.with_feature_map(feature_map.clone());
            Box::new(move |x| model.predict(x))
        }
    };

    let mut n_points = 0;
    let mut n_separated = 0;
    let mut max_deviation = 0.0f64;
    let mut per_region_accuracy = Vec::with_capacity(regions.len());
    for r in regions {
        let mut ok = 0;
        for p in &r.points {
            let dev = (predict(p)? - r.label).abs();
            max_deviation = max_deviation.max(dev);
            if dev < delta {
                ok += 1;
            }
        }
        per_region_accuracy.push(ok as f64 / r.points.len() as f64);
        n_points += r.points.len();
        n_separated += ok;
    }
    Ok(ClassificationReport {
        delta,
        n_points,
        n_separated,
        accuracy: n_separated as f64 / n_points as f64,
        per_region_accuracy,
        max_deviation,
    })
}

fn linspace(lo: f64, hi: f64, k: usize) -> impl Iterator<Item = f64> {
    (0..k).map(move |i| lo + (hi - lo) * i as f64 / (k - 1) as f64)
}

/// `[0, 0.3]` labeled −1 and `[0.7, 1]` labeled +1, 50 evenly spaced points
/// each.
pub fn two_interval_task() -> Vec<Region> {
    vec![
        Region {
            label: -1.0,
            points: linspace(0.0, 0.3, 50).map(|x| vec![x]).collect(),
        },
        Region {
            label: 1.0,
            points: linspace(0.7, 1.0, 50).map(|x| vec![x]).collect(),
        },
    ]
}

/// Three squares in `[0, 1]²` labeled 0, 1, 2 with `per_region` uniform
/// points each.
pub fn three_square_task(seed: u64, per_region: usize) -> Vec<Region> {
    let boxes = [
        (0.0, [0.05, 0.35], [0.05, 0.35]),
        (1.0, [0.65, 0.95], [0.05, 0.35]),
        (2.0, [0.35, 0.65], [0.65, 0.95]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    boxes
        .iter()
        .map(|&(label, xr, yr)| Region {
            label,
            points: (0..per_region)
                .map(|_| vec![rng.gen_range(xr[0]..=xr[1]), rng.gen_range(yr[0]..=yr[1])])
                .collect(),
        })
        .collect()
}
