use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{BackendKind, ExperimentConfig, ExperimentKind, GridSpec, TaskKind};
use super::output::{Cell, Table};
use super::results::*;
use crate::approximator::{
    classify_regions, counterexample_enumerate, fit_least_squares, grid_points, jackson_qubits, min_bound_s4,
    qubits_for_epsilon, sequential_search, sup_error, three_square_task, two_interval_task, BernsteinApproximator,
    DesignMatrix, FitBackend, ModelRecord, RateBoundSpec, Rational, SearchOutcome,
};
use crate::error::{Error, Result};
use crate::feature_map::{
    enumerate_observables_dedup, observable_count_bound, slots_per_residue, ActivationKind, AlphaIndex, BasisLabel,
    Evaluation, FeatureMapSpec, MultiDegree, Variant,
};

/// Bernstein runs check the projector-observable identity on the statevector
/// up to this many qubits.
const BERNSTEIN_ORACLE_MAX_QUBITS: u64 = 10;
const BERNSTEIN_ORACLE_POINTS: usize = 50;
/// Slope tolerance on the guaranteed `N^{-1/3}` rate.
const RATE_SLOPE_LIMIT: f64 = -1.0 / 3.0 + 0.02;
/// Errors below this are treated as exact and excluded from slope fits.
const EXACT_ERROR: f64 = 1e-12;

pub const SEQUENTIAL_NOTE: &str =
    "linear independence of the theta values over the rationals is assumed, not checked";

/// Everything one experiment produces, before anything touches the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub table: Table,
    pub summary: Summary,
    pub model: Option<ModelRecord>,
}

struct Checks {
    failures: Vec<String>,
    warnings: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn assert(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(msg());
        }
    }

    fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }
}

fn finish(cfg: &ExperimentConfig, checks: Checks, outcome: Outcome, table: Table, model: Option<ModelRecord>) -> ExperimentOutput {
    ExperimentOutput {
        table,
        summary: Summary {
            schema_version: super::config::SCHEMA_VERSION,
            seed: cfg.seed,
            pass: checks.failures.is_empty(),
            failures: checks.failures,
            warnings: checks.warnings,
            outcome,
        },
        model,
    }
}

/// Runs the experiment named in `cfg` without writing any files.
pub fn run_experiment(cfg: &ExperimentConfig, verbose: bool) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let log = |msg: &str| {
        if verbose {
            eprintln!("[{}] {msg}", cfg.experiment);
        }
    };
    match cfg.experiment {
        ExperimentKind::OracleCheck => oracle_check(cfg, &log),
        ExperimentKind::Fit => fit(cfg, &log),
        ExperimentKind::Bernstein => bernstein(cfg, &log, false),
        ExperimentKind::RateCurve => bernstein(cfg, &log, true),
        ExperimentKind::Sequential => sequential(cfg, &log),
        ExperimentKind::Counterexample => counterexample(cfg, &log),
        ExperimentKind::Classify => classify(cfg, &log),
        ExperimentKind::DedupCount => dedup_count(cfg, &log),
    }
}

fn random_point(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.gen::<f64>()).collect()
}

fn alpha_string(a: &AlphaIndex) -> String {
    a.bits().iter().map(|b| char::from(b'0' + b)).collect()
}

fn oracle_check(cfg: &ExperimentConfig, log: &dyn Fn(&str)) -> Result<ExperimentOutput> {
    let n = cfg.require(&cfg.n_qubits, "N")?;
    let d = cfg.require(&cfg.d, "d")?;
    let trials = cfg.trials.unwrap_or(1000);
    if d == 0 || n < d {
        return Err(Error::config(format!("oracle-check needs N >= d >= 1 (N={n}, d={d})")));
    }
    let arccos = FeatureMapSpec::parallel_arccos(d, n)?;
    let projector_degree = (n % d == 0).then_some(n / d);
    let kinds = [ActivationKind::Tanh, ActivationKind::Cosine, ActivationKind::PiecewiseSign];

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut table = Table::new(["trial", "scenario", "observable", "closed_form", "oracle", "abs_diff"]);
    let mut stats: Vec<ScenarioStat> = Vec::new();
    let scenario_count = if projector_degree.is_some() { 4 } else { 3 };
    for trial in 0..trials {
        let (scenario, observable, closed, oracle) = match rng.gen_range(0..scenario_count) {
            0 => {
                let alpha = AlphaIndex::from_index(n, rng.gen_range(0..1u64 << n));
                let x = random_point(&mut rng, d);
                let label = BasisLabel::Alpha(alpha.clone());
                (
                    "PARALLEL_ARCCOS".to_string(),
                    alpha_string(&alpha),
                    arccos.basis_value(&label, &x, Evaluation::ClosedForm)?,
                    arccos.basis_value(&label, &x, Evaluation::Oracle)?,
                )
            }
            1 => {
                let kind = kinds[rng.gen_range(0..kinds.len())];
                let spec = FeatureMapSpec::parallel_activation(d, n, kind, rng.gen())?;
                let x = random_point(&mut rng, d);
                let (label, name) = if rng.gen_bool(0.5) {
                    let j = rng.gen_range(0..n);
                    (BasisLabel::Qubit(j), format!("Z_{j}"))
                } else {
                    let alpha = AlphaIndex::from_index(n, rng.gen_range(0..1u64 << n));
                    let name = alpha_string(&alpha);
                    (BasisLabel::Alpha(alpha), name)
                };
                (
                    format!("PARALLEL_ACTIVATION/{}", serde_json::to_value(kind)?.as_str().unwrap_or("")),
                    name,
                    spec.basis_value(&label, &x, Evaluation::ClosedForm)?,
                    spec.basis_value(&label, &x, Evaluation::Oracle)?,
                )
            }
            2 => {
                let theta = rng.gen_range(-2.0..2.0);
                let reps = rng.gen_range(1..=64u64);
                let spec = FeatureMapSpec::sequential(vec![theta])?;
                (
                    "SEQUENTIAL".to_string(),
                    format!("n={reps}"),
                    spec.sequential_value(0, reps, Evaluation::ClosedForm)?,
                    spec.sequential_value(0, reps, Evaluation::Oracle)?,
                )
            }
            _ => {
                let degree = projector_degree.expect("projector scenario needs N divisible by d");
                let p: Vec<usize> = (0..d).map(|_| rng.gen_range(0..=degree)).collect();
                let name = format!("p={p:?}");
                let label = BasisLabel::Degree(MultiDegree::new(p, degree)?);
                let x = random_point(&mut rng, d);
                (
                    "PARALLEL_ARCCOS/PROJECTOR".to_string(),
                    name,
                    arccos.basis_value(&label, &x, Evaluation::ClosedForm)?,
                    arccos.basis_value(&label, &x, Evaluation::Oracle)?,
                )
            }
        };
        let diff = (closed - oracle).abs();
        match stats.iter_mut().find(|s| s.scenario == scenario) {
            Some(s) => {
                s.cases += 1;
                s.max_abs_diff = s.max_abs_diff.max(diff);
            }
            None => stats.push(ScenarioStat {
                scenario: scenario.clone(),
                cases: 1,
                max_abs_diff: diff,
            }),
        }
        table.push(vec![
            trial.into(),
            scenario.into(),
            observable.into(),
            closed.into(),
            oracle.into(),
            diff.into(),
        ]);
    }
    stats.sort_by(|a, b| a.scenario.cmp(&b.scenario));
    let max_abs_diff = stats.iter().map(|s| s.max_abs_diff).fold(0.0, f64::max);
    log(&format!("{trials} trials, max |closed - oracle| = {max_abs_diff:e}"));

    let mut checks = Checks::new();
    let tol = cfg.tolerances.oracle;
    checks.assert(max_abs_diff < tol, || {
        format!("max |closed form - oracle| = {max_abs_diff:e} is not below {tol:e}")
    });
    let outcome = Outcome::OracleCheck(OracleCheckResults {
        n_qubits: n,
        d,
        trials,
        tolerance: tol,
        max_abs_diff,
        scenarios: stats,
    });
    Ok(finish(cfg, checks, outcome, table, None))
}

fn fitting_points(d: usize, grid: GridSpec, seed: u64) -> Result<Vec<Vec<f64>>> {
    if grid.points_per_dim == 0 && grid.random_points == 0 {
        return Err(Error::config("grid has no points"));
    }
    let mut points = if grid.points_per_dim > 0 {
        grid_points(d, grid.points_per_dim)
    } else {
        Vec::new()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    points.extend((0..grid.random_points).map(|_| random_point(&mut rng, d)));
    Ok(points)
}

fn fit(cfg: &ExperimentConfig, log: &dyn Fn(&str)) -> Result<ExperimentOutput> {
    let spec = cfg.require(&cfg.feature_map, "feature_map")?;
    let target = cfg.require(&cfg.target, "target")?;
    let d = spec.d();
    target.validate(d)?;
    let grid = cfg.grid.unwrap_or_default();
    let lambda = cfg.ridge_lambda.unwrap_or(0.0);
    let points = fitting_points(d, grid, cfg.seed)?;
    let targets: Vec<f64> = points.iter().map(|x| target.eval(x)).collect();
    let labels = spec.default_labels()?;
    let dm = DesignMatrix::build(&spec, labels, points.clone(), Evaluation::ClosedForm)?;
    log(&format!("design matrix {} x {}", dm.nrows(), dm.ncols()));
    let mut model = fit_least_squares(&dm, &targets, lambda)?.with_feature_map(spec.clone());
    model.seed = Some(cfg.seed);

    let mut header: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    header.extend(["target", "prediction", "abs_error"].map(String::from));
    let mut table = Table::new(header);
    let mut max_abs_error = 0.0f64;
    for (i, x) in points.iter().enumerate() {
        let row: Vec<f64> = (0..dm.ncols()).map(|k| dm.values()[(i, k)]).collect();
        let pred = model.predict_row(&row)?;
        let err = (pred - targets[i]).abs();
        max_abs_error = max_abs_error.max(err);
        let mut cells: Vec<Cell> = x.iter().map(|&v| v.into()).collect();
        cells.extend([targets[i].into(), pred.into(), err.into()]);
        table.push(cells);
    }

    let exact = spec.variant() == Variant::ParallelArccos
        && lambda == 0.0
        && target.is_poly_within(&slots_per_residue(spec.n_qubits(), d));
    let mut checks = Checks::new();
    if exact {
        let tol = cfg.tolerances.fit;
        let r = model.residual_norm;
        checks.assert(r < tol, || {
            format!("residual {r:e} of an exactly representable polynomial is not below {tol:e}")
        });
    }
    if model.rank_deficient {
        checks.warn(format!(
            "design matrix is rank deficient (rank {} < {}); minimum-norm weights reported",
            model.rank,
            dm.ncols()
        ));
    }
    let record = match model.to_record() {
        Ok(r) => Some(r),
        Err(e) => {
            checks.warn(format!("model not written: {e}"));
            None
        }
    };
    let outcome = Outcome::Fit(FitResults {
        feature_map: spec,
        target,
        n_points: dm.nrows(),
        n_basis: dm.ncols(),
        ridge_lambda: lambda,
        solver: model.solver,
        rank: model.rank,
        rank_deficient: model.rank_deficient,
        residual_norm: model.residual_norm,
        max_abs_error,
        exact_representation_expected: exact,
        model_file: record.as_ref().map(|_| model_file_name(ExperimentKind::Fit)),
    });
    Ok(finish(cfg, checks, outcome, table, record))
}

pub fn model_file_name(kind: ExperimentKind) -> String {
    format!("{kind}_model.json")
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Tail length used for the rate slope: the last `max(3, ⌈len/2⌉)` rows.
pub fn slope_tail_len(rows: usize) -> usize {
    3.max(rows.div_ceil(2)).min(rows)
}

/// Rate-curve CSV: `n,N,sup_error,s4_bound,log_slope`, the slope filled in on
/// the last row only.
pub fn emit_rate_curve(rows: &[BernsteinRow], log_slope: Option<f64>) -> Table {
    let mut table = Table::new(["n", "N", "sup_error", "s4_bound", "log_slope"]);
    for (i, r) in rows.iter().enumerate() {
        let slope = if i + 1 == rows.len() { log_slope.into() } else { Cell::Empty };
        table.push(vec![r.n.into(), r.n_qubits.into(), r.sup_error.into(), r.s4_bound.into(), slope]);
    }
    table
}

fn bernstein(cfg: &ExperimentConfig, log: &dyn Fn(&str), rate_curve: bool) -> Result<ExperimentOutput> {
    let target = cfg.require(&cfg.target, "target")?;
    let d = cfg.d.unwrap_or(1);
    if d == 0 {
        return Err(Error::config("d must be >= 1"));
    }
    target.validate(d)?;
    let mut degrees = cfg.require(&cfg.n, "n")?.to_vec();
    if degrees.is_empty() || degrees.contains(&0) {
        return Err(Error::config("n values must be >= 1"));
    }
    degrees.sort_unstable();
    degrees.dedup();
    let lipschitz = target.lipschitz_constant(d);
    let bound_spec = lipschitz.map(|c| RateBoundSpec::lipschitz(d, c)).transpose()?;
    let mut checks = Checks::new();
    if bound_spec.is_none() {
        checks.warn("target has no Lipschitz constant; bound column left empty");
    }

    let g = |x: &[f64]| target.eval(x);
    let mut rows = Vec::with_capacity(degrees.len());
    let mut last = None;
    for &n in &degrees {
        let approx = BernsteinApproximator::from_fn(d, n as usize, g)?;
        let report = sup_error(d, cfg.seed, |x| approx.evaluate(x), g)?;
        let (s4_bound, best_delta) = match &bound_spec {
            Some(s) => {
                let (b, delta) = min_bound_s4(s, n)?;
                (Some(b), Some(delta))
            }
            None => (None, None),
        };
        let n_qubits = n * d as u64;
        let oracle_max_diff = if !rate_curve && n_qubits <= BERNSTEIN_ORACLE_MAX_QUBITS {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut worst = 0.0f64;
            for _ in 0..BERNSTEIN_ORACLE_POINTS {
                let x = random_point(&mut rng, d);
                worst = worst.max((approx.quantum_output(&x)? - approx.evaluate(&x)?).abs());
            }
            Some(worst)
        } else {
            None
        };
        log(&format!("n={n}: sup error {:e}, bound {:?}", report.max_error, s4_bound));
        if let Some(b) = s4_bound {
            let e = report.max_error;
            checks.assert(e <= b, || format!("n={n}: sup error {e:e} exceeds bound {b:e}"));
        }
        if let Some(diff) = oracle_max_diff {
            let tol = cfg.tolerances.oracle;
            checks.assert(diff < tol, || {
                format!("n={n}: Bernstein and projector-observable outputs differ by {diff:e}")
            });
        }
        rows.push(BernsteinRow {
            n,
            n_qubits,
            sup_error: report.max_error,
            s4_bound,
            best_delta,
            oracle_max_diff,
        });
        last = Some(approx);
    }

    if !rate_curve {
        let approx = last.expect("at least one degree");
        let record = match approx.to_record(Some(cfg.seed)) {
            Ok(r) => Some(r),
            Err(e) => {
                checks.warn(format!("model not written: {e}"));
                None
            }
        };
        let mut table = Table::new(["n", "N", "sup_error", "s4_bound", "best_delta", "oracle_max_diff"]);
        for r in &rows {
            table.push(vec![
                r.n.into(),
                r.n_qubits.into(),
                r.sup_error.into(),
                r.s4_bound.into(),
                r.best_delta.into(),
                r.oracle_max_diff.into(),
            ]);
        }
        let outcome = Outcome::Bernstein(BernsteinResults {
            d,
            target,
            lipschitz_c: lipschitz,
            rows,
            model_file: record.as_ref().map(|_| model_file_name(ExperimentKind::Bernstein)),
        });
        return Ok(finish(cfg, checks, outcome, table, record));
    }

    let tail = slope_tail_len(rows.len());
    let tail_rows = &rows[rows.len() - tail..];
    let log_slope = if rows.len() < 3 {
        checks.warn("fewer than 3 degrees; slope omitted");
        None
    } else if tail_rows.iter().any(|r| r.sup_error <= EXACT_ERROR) {
        checks.warn("errors at machine precision in the tail; slope omitted");
        None
    } else {
        let x: Vec<f64> = tail_rows.iter().map(|r| r.n_qubits as f64).collect();
        let y: Vec<f64> = tail_rows.iter().map(|r| r.sup_error).collect();
        Some(log_log_slope(&x, &y))
    };
    if let (Some(s), Some(_)) = (log_slope, lipschitz) {
        checks.assert(s <= RATE_SLOPE_LIMIT, || {
            format!("log-log slope {s} is above the guaranteed rate -1/3 (+0.02)")
        });
    }
    let strictly_decreasing = rows.windows(2).all(|w| w[1].sup_error < w[0].sup_error);

    let (qubit_estimate, jackson) = match (cfg.epsilon, &bound_spec, lipschitz) {
        (Some(eps), Some(spec), Some(c)) => {
            let q = match qubits_for_epsilon(spec, eps) {
                Ok(q) => Some(q),
                Err(e) => {
                    checks.warn(format!("qubits_for_epsilon: {e}"));
                    None
                }
            };
            let a = cfg.jackson_a.unwrap_or(1.0);
            (q, Some(jackson_qubits(d, c, eps, a)?))
        }
        _ => (None, None),
    };
    let table = emit_rate_curve(&rows, log_slope);
    let outcome = Outcome::RateCurve(RateCurveResults {
        d,
        target,
        lipschitz_c: lipschitz,
        rows,
        log_slope,
        slope_tail_len: tail,
        strictly_decreasing,
        qubits_for_epsilon: qubit_estimate,
        jackson_qubits: jackson,
        jackson_a: jackson.map(|_| cfg.jackson_a.unwrap_or(1.0)),
    });
    Ok(finish(cfg, checks, outcome, table, None))
}

fn sequential(cfg: &ExperimentConfig, log: &dyn Fn(&str)) -> Result<ExperimentOutput> {
    let thetas = match (&cfg.theta_values, &cfg.feature_map) {
        (Some(t), _) => t.clone(),
        (None, Some(spec)) if spec.variant() == Variant::Sequential => spec.theta_values().to_vec(),
        _ => return Err(Error::config("sequential requires 'theta_values' or a SEQUENTIAL feature_map")),
    };
    let targets = cfg.require(&cfg.targets, "targets")?;
    let epsilon = cfg.require(&cfg.epsilon, "epsilon")?;
    let n_max = cfg.n_max.unwrap_or(1_000_000);
    let spec = FeatureMapSpec::sequential(thetas.clone())?;
    let outcome = sequential_search(&thetas, &targets, epsilon, n_max)?;
    log(&format!("{outcome:?}"));

    let (n, w) = match outcome {
        SearchOutcome::Found { n, w, .. } => (n, w),
        SearchOutcome::NotFound { best_n, w, .. } => (best_n, w),
    };
    let mut table = Table::new(["point", "theta", "target", "prediction", "abs_error"]);
    for (i, (&t, &g)) in thetas.iter().zip(&targets).enumerate() {
        let pred = w * spec.sequential_value(i, n, Evaluation::ClosedForm)?;
        table.push(vec![i.into(), t.into(), g.into(), pred.into(), (pred - g).abs().into()]);
    }
    let mut checks = Checks::new();
    checks.warn(SEQUENTIAL_NOTE);
    if !outcome.is_found() {
        checks.warn(format!("no n <= {n_max} reached epsilon {epsilon}; best n reported"));
    }
    let results = Outcome::Sequential(SequentialResults {
        theta_values: thetas,
        targets,
        epsilon,
        n_max,
        search: outcome,
        note: SEQUENTIAL_NOTE.into(),
    });
    Ok(finish(cfg, checks, results, table, None))
}

fn counterexample(cfg: &ExperimentConfig, log: &dyn Fn(&str)) -> Result<ExperimentOutput> {
    let pairs = cfg.require(&cfg.theta_rationals, "theta_rationals")?;
    let rationals: Vec<Rational> = pairs
        .iter()
        .map(|&(a, b)| Rational::new(a, b))
        .collect::<Result<_>>()?;
    let report = counterexample_enumerate(&rationals, cfg.targets.as_deref())?;
    log(&format!("period {}, {} distinct tuples", report.period, report.tuples.len()));

    let mut header = vec!["tuple".to_string()];
    header.extend((1..=rationals.len()).map(|i| format!("psi_{i}")));
    let mut table = Table::new(header);
    for (k, t) in report.tuples.iter().enumerate() {
        let mut row: Vec<Cell> = vec![k.into()];
        row.extend(t.iter().map(|&v| v.into()));
        table.push(row);
    }

    let mut checks = Checks::new();
    let (epsilon, n_max, search) = match (&cfg.targets, report.error_floor) {
        (Some(targets), Some(floor)) => {
            let eps = match cfg.epsilon {
                Some(e) => e,
                None if floor > 0.0 => floor,
                None => {
                    checks.warn("error floor is zero; no search run");
                    return Ok(counterexample_finish(cfg, checks, pairs, report, None, None, None, table));
                }
            };
            let n_max = cfg.n_max.unwrap_or(10_000);
            let thetas: Vec<f64> = rationals.iter().map(|r| r.to_f64()).collect();
            let out = sequential_search(&thetas, targets, eps, n_max)?;
            if eps <= floor {
                checks.assert(!out.is_found(), || {
                    format!("search reported success at epsilon {eps} below the floor {floor}")
                });
            }
            (Some(eps), Some(n_max), Some(out))
        }
        _ => (None, None, None),
    };
    Ok(counterexample_finish(cfg, checks, pairs, report, epsilon, n_max, search, table))
}

#[allow(clippy::too_many_arguments)]
fn counterexample_finish(
    cfg: &ExperimentConfig,
    checks: Checks,
    pairs: Vec<(i64, i64)>,
    report: crate::approximator::CounterexampleReport,
    epsilon: Option<f64>,
    n_max: Option<u64>,
    search: Option<SearchOutcome>,
    table: Table,
) -> ExperimentOutput {
    let outcome = Outcome::Counterexample(CounterexampleResults {
        theta_rationals: pairs,
        targets: cfg.targets.clone(),
        common_denominator: report.common_denominator,
        period: report.period,
        tuples: report.tuples,
        error_floor: report.error_floor,
        best_weight: report.best_weight,
        epsilon,
        n_max,
        search,
    });
    finish(cfg, checks, outcome, table, None)
}

fn classify(cfg: &ExperimentConfig, log: &dyn Fn(&str)) -> Result<ExperimentOutput> {
    let cc = cfg.require(&cfg.classification, "classification")?;
    let (task_name, regions) = match cc.task {
        TaskKind::TwoInterval => ("TWO_INTERVAL", two_interval_task()),
        TaskKind::ThreeSquare => ("THREE_SQUARE", three_square_task(cfg.seed, cc.per_region)),
        TaskKind::Custom => {
            if cc.regions.is_empty() {
                return Err(Error::config("CUSTOM task requires 'regions'"));
            }
            ("CUSTOM", cc.regions.clone())
        }
    };
    let backends: Vec<(Option<u64>, FitBackend)> = match cc.backend {
        BackendKind::Bernstein => {
            let mut ns = cfg.n.as_ref().map_or(vec![8, 16, 32], |n| n.to_vec());
            ns.sort_unstable();
            ns.dedup();
            ns.into_iter()
                .map(|n| (Some(n), FitBackend::Bernstein { n: n as usize }))
                .collect()
        }
        BackendKind::LeastSquares => vec![(
            None,
            FitBackend::LeastSquares {
                feature_map: cfg.require(&cfg.feature_map, "feature_map")?,
                ridge_lambda: cfg.ridge_lambda.unwrap_or(0.0),
                grid_per_dim: cc.grid_per_dim,
            },
        )],
    };

    let mut rows = Vec::new();
    let mut delta = 0.0;
    for (n, backend) in &backends {
        let rep = classify_regions(&regions, backend)?;
        log(&format!("n={n:?}: accuracy {}", rep.accuracy));
        delta = rep.delta;
        rows.push(ClassifyRow {
            n: *n,
            accuracy: rep.accuracy,
            n_separated: rep.n_separated,
            n_points: rep.n_points,
            max_deviation: rep.max_deviation,
            per_region_accuracy: rep.per_region_accuracy,
        });
    }
    let mut table = Table::new(["n", "accuracy", "n_separated", "n_points", "max_deviation", "delta"]);
    for r in &rows {
        table.push(vec![
            r.n.map_or(Cell::Empty, Cell::from),
            r.accuracy.into(),
            r.n_separated.into(),
            r.n_points.into(),
            r.max_deviation.into(),
            delta.into(),
        ]);
    }
    let nondecreasing = rows.windows(2).all(|w| w[1].accuracy >= w[0].accuracy);
    let mut checks = Checks::new();
    if let Some(min) = cfg.min_accuracy {
        let acc = rows.last().map_or(0.0, |r| r.accuracy);
        checks.assert(acc >= min, || format!("accuracy {acc} is below min_accuracy {min}"));
    }
    if !nondecreasing {
        checks.warn("accuracy decreases somewhere along the degree sequence");
    }
    let outcome = Outcome::Classify(ClassifyResults {
        task: task_name.into(),
        backend: match cc.backend {
            BackendKind::Bernstein => "BERNSTEIN",
            BackendKind::LeastSquares => "LEAST_SQUARES",
        }
        .into(),
        delta,
        rows,
        nondecreasing,
        min_accuracy: cfg.min_accuracy,
    });
    Ok(finish(cfg, checks, outcome, table, None))
}

/// Brute force is skipped above this many qubits.
const DEDUP_BRUTE_FORCE_MAX: usize = 20;

fn dedup_count(cfg: &ExperimentConfig, log: &dyn Fn(&str)) -> Result<ExperimentOutput> {
    let n = cfg.require(&cfg.n_qubits, "N")?;
    let d = cfg.require(&cfg.d, "d")?;
    if n > 64 {
        return Err(Error::config("dedup-count supports N <= 64"));
    }
    let reps = enumerate_observables_dedup(n, d)?;
    let bound = u64::try_from(observable_count_bound(n, d)).map_err(|_| Error::config("bound overflows u64"))?;
    let brute = (n <= DEDUP_BRUTE_FORCE_MAX).then(|| {
        (0..1u64 << n)
            .map(|i| AlphaIndex::from_index(n, i).residue_counts(d))
            .collect::<BTreeSet<_>>()
            .len()
    });
    log(&format!("{} classes, bound {bound}", reps.len()));

    let mut header = vec!["class".to_string(), "alpha".to_string()];
    header.extend((1..=d).map(|i| format!("p{i}")));
    let mut table = Table::new(header);
    for (k, a) in reps.iter().enumerate() {
        let mut row: Vec<Cell> = vec![k.into(), alpha_string(a).into()];
        row.extend(a.residue_counts(d).into_iter().map(Cell::from));
        table.push(row);
    }
    let mut checks = Checks::new();
    let distinct = reps.len();
    checks.assert(distinct as u64 <= bound, || format!("{distinct} classes exceed the bound {bound}"));
    if let Some(b) = brute {
        checks.assert(b == distinct, || format!("enumeration found {distinct} classes, brute force {b}"));
    }
    let outcome = Outcome::DedupCount(DedupResults {
        n_qubits: n,
        d,
        distinct,
        bound,
        brute_force_classes: brute,
    });
    Ok(finish(cfg, checks, outcome, table, None))
}
