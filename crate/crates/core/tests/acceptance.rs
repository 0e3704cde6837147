//! Acceptance suite. Prints one line per criterion and exits non-zero if any
//! criterion fails or exceeds its time budget.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qfm_uap::approximator::{
    classify_regions, counterexample_enumerate, fit_least_squares, grid_points, m_epsilon_numeric, min_bound_s4,
    qubits_for_epsilon, sequential_search, sup_error, three_square_task, two_interval_task, BernsteinApproximator,
    DesignMatrix, FitBackend, RateBoundSpec, Rational, SearchOutcome,
};
use qfm_uap::experiments::{log_log_slope, slope_tail_len};
use qfm_uap::feature_map::{
    enumerate_observables_dedup, observable_count_bound, ActivationKind, AlphaIndex, BasisLabel, Evaluation,
    FeatureMapSpec, MultiDegree,
};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_point(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.gen()).collect()
}

fn oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let kinds = [ActivationKind::Tanh, ActivationKind::Cosine, ActivationKind::PiecewiseSign];
    let mut worst = 0.0f64;
    let mut counts = [0usize; 4];
    for _ in 0..1000 {
        let d = rng.gen_range(1..=3);
        let n = rng.gen_range(d..=10);
        let x = random_point(&mut rng, d);
        let scenario = rng.gen_range(0..4);
        counts[scenario] += 1;
        let (closed, oracle) = match scenario {
            0 => {
                let spec = FeatureMapSpec::parallel_arccos(d, n).unwrap();
                let label = BasisLabel::Alpha(AlphaIndex::from_index(n, rng.gen_range(0..1u64 << n)));
                (
                    spec.basis_value(&label, &x, Evaluation::ClosedForm).unwrap(),
                    spec.basis_value(&label, &x, Evaluation::Oracle).unwrap(),
                )
            }
            1 => {
                let degree = n / d;
                let spec = FeatureMapSpec::parallel_arccos(d, degree * d).unwrap();
                let p = (0..d).map(|_| rng.gen_range(0..=degree)).collect();
                let label = BasisLabel::Degree(MultiDegree::new(p, degree).unwrap());
                (
                    spec.basis_value(&label, &x, Evaluation::ClosedForm).unwrap(),
                    spec.basis_value(&label, &x, Evaluation::Oracle).unwrap(),
                )
            }
            2 => {
                let kind = kinds[rng.gen_range(0..3)];
                let spec = FeatureMapSpec::parallel_activation(d, n, kind, rng.gen()).unwrap();
                let label = BasisLabel::Qubit(rng.gen_range(0..n));
                (
                    spec.basis_value(&label, &x, Evaluation::ClosedForm).unwrap(),
                    spec.basis_value(&label, &x, Evaluation::Oracle).unwrap(),
                )
            }
            _ => {
                let spec = FeatureMapSpec::sequential(vec![rng.gen_range(-2.0..2.0)]).unwrap();
                let reps = rng.gen_range(1..=64);
                (
                    spec.sequential_value(0, reps, Evaluation::ClosedForm).unwrap(),
                    spec.sequential_value(0, reps, Evaluation::Oracle).unwrap(),
                )
            }
        };
        ensure((-1.0..=1.0).contains(&closed), || format!("basis value {closed} outside [-1, 1]"))?;
        worst = worst.max((closed - oracle).abs());
    }
    ensure(worst < 1e-10, || format!("max |closed - oracle| = {worst:e}"))?;
    Ok(format!(
        "1000 cases (alpha {}, projector {}, activation {}, sequential {}), max diff {worst:.1e}",
        counts[0], counts[1], counts[2], counts[3]
    ))
}

fn exact_polynomials() -> Check {
    let grid = grid_points(2, 10);
    let mut out = Vec::new();
    for (n_qubits, powers) in [(2usize, [1i32, 1i32]), (4, [2, 1])] {
        let spec = FeatureMapSpec::parallel_arccos(2, n_qubits).unwrap();
        let targets: Vec<f64> = grid
            .iter()
            .map(|x| x[0].powi(powers[0]) * x[1].powi(powers[1]))
            .collect();
        let dm = DesignMatrix::build(&spec, spec.default_labels().unwrap(), grid.clone(), Evaluation::ClosedForm)
            .unwrap();
        let model = fit_least_squares(&dm, &targets, 0.0).unwrap();
        let r = model.residual_norm;
        ensure(r < 1e-9, || format!("N={n_qubits}, powers {powers:?}: residual {r:e}"))?;
        out.push(format!("x1^{}x2^{} N={n_qubits} residual {r:.1e}", powers[0], powers[1]));
    }
    Ok(out.join("; "))
}

fn bernstein_quantum_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let g = |x: &[f64]| (x[0] - 0.5).abs() + (3.0 * x[1]).cos();
    let mut worst = 0.0f64;
    for n in 1..=4 {
        let b = BernsteinApproximator::from_fn(2, n, g).unwrap();
        for _ in 0..50 {
            let x = random_point(&mut rng, 2);
            worst = worst.max((b.evaluate(&x).unwrap() - b.quantum_output(&x).unwrap()).abs());
        }
    }
    ensure(worst < 1e-10, || format!("max difference {worst:e}"))?;
    Ok(format!("d=2, n=1..4, 50 points each, max diff {worst:.1e}"))
}

struct RateRun {
    n_qubits: Vec<f64>,
    errors: Vec<f64>,
    bounds: Vec<f64>,
}

fn rate_runs() -> RateRun {
    let spec = RateBoundSpec::lipschitz(1, 1.0).unwrap();
    let g = |x: &[f64]| (x[0] - 0.5).abs();
    let mut run = RateRun {
        n_qubits: Vec::new(),
        errors: Vec::new(),
        bounds: Vec::new(),
    };
    for n in [4u64, 16, 64, 256, 1024] {
        let b = BernsteinApproximator::from_fn(1, n as usize, g).unwrap();
        let rep = sup_error(1, 0, |x| b.evaluate(x), g).unwrap();
        run.n_qubits.push(n as f64);
        run.errors.push(rep.max_error);
        run.bounds.push(min_bound_s4(&spec, n).unwrap().0);
    }
    run
}

fn s4_bound_holds() -> Check {
    let run = rate_runs();
    for ((n, e), b) in run.n_qubits.iter().zip(&run.errors).zip(&run.bounds) {
        ensure(e <= b, || format!("n={n}: error {e} > bound {b}"))?;
    }
    ensure(run.errors.windows(2).all(|w| w[1] < w[0]), || {
        format!("errors not strictly decreasing: {:?}", run.errors)
    })?;
    let pairs: Vec<String> = run
        .errors
        .iter()
        .zip(&run.bounds)
        .map(|(e, b)| format!("{e:.4}<={b:.4}"))
        .collect();
    Ok(format!("n=4..1024: {}", pairs.join(", ")))
}

fn rate_slope() -> Check {
    let run = rate_runs();
    let tail = slope_tail_len(run.errors.len());
    let k = run.errors.len() - tail;
    let slope = log_log_slope(&run.n_qubits[k..], &run.errors[k..]);
    let full = log_log_slope(&run.n_qubits, &run.errors);
    ensure(slope <= -1.0 / 3.0 + 0.02, || format!("tail slope {slope}"))?;
    Ok(format!("tail slope {slope:.4} (all points {full:.4}) <= -0.3133"))
}

fn m_epsilon_closed_form() -> Check {
    let mut worst = 0.0f64;
    for i in 0..20 {
        let d = 1 + i % 4;
        let c = [0.5, 1.0, 1.7, 3.0, 0.8][i % 5];
        let frac = [0.05, 0.2, 0.45, 0.9, 1.3][(i / 4) % 5];
        let eps = frac * c * (d as f64).sqrt();
        let spec = RateBoundSpec::lipschitz(d, c).unwrap();
        let est = qubits_for_epsilon(&spec, eps).unwrap();
        let formula = 27.0 * c.powi(3) * (d as f64).powf(2.5) / (8.0 * eps.powi(3));
        let rel_formula = (est.m_epsilon - formula).abs() / formula;
        ensure(rel_formula < 1e-12, || {
            format!("d={d} C={c} eps={eps}: analytic {} vs formula {formula}", est.m_epsilon)
        })?;
        let numeric = m_epsilon_numeric(&spec, eps).unwrap();
        let rel = (numeric - est.m_epsilon).abs() / est.m_epsilon;
        ensure(rel < 0.01, || {
            format!("d={d} C={c} eps={eps}: numeric {numeric} vs analytic {}", est.m_epsilon)
        })?;
        ensure(est.n_qubits == d as u64 * (est.m_epsilon.floor() as u64 + 1), || "qubit count".into())?;
        worst = worst.max(rel);
    }
    let example = qubits_for_epsilon(&RateBoundSpec::lipschitz(1, 1.0).unwrap(), 0.5).unwrap();
    ensure(example.m_epsilon == 27.0 && example.n_qubits == 28, || format!("{example:?}"))?;
    Ok(format!("20 combinations, max numeric/analytic gap {worst:.1e}; d=1,C=1,eps=0.5 -> N=28"))
}

fn sequential_uap() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut largest = 0;
    for _ in 0..20 {
        let target = rng.gen_range(-0.9..0.9);
        match sequential_search(&[2f64.sqrt()], &[target], 0.01, 1_000_000).unwrap() {
            SearchOutcome::Found { n, max_error, .. } => {
                ensure(max_error < 0.01, || format!("target {target}: error {max_error}"))?;
                largest = largest.max(n);
            }
            other => return Err(format!("target {target}: {other:?}")),
        }
    }
    Ok(format!("20/20 targets found, largest n = {largest}"))
}

fn impossibility() -> Check {
    let thetas = [Rational::new(1, 3).unwrap(), Rational::new(2, 3).unwrap()];
    let rep = counterexample_enumerate(&thetas, Some(&[2.0, 1.0])).unwrap();
    ensure(rep.period == 3, || format!("period {}", rep.period))?;
    ensure(rep.tuples.len() == 2, || format!("{} tuples", rep.tuples.len()))?;
    ensure(rep.tuples.iter().all(|t| t[0] == t[1]), || format!("{:?}", rep.tuples))?;
    let floor = rep.error_floor.unwrap();
    ensure((floor - 0.5).abs() <= 1e-12, || format!("floor {floor}"))?;
    let out = sequential_search(&[1.0 / 3.0, 2.0 / 3.0], &[2.0, 1.0], floor, 100_000).unwrap();
    ensure(!out.is_found(), || format!("{out:?}"))?;
    Ok(format!("period 3, tuples {:?}, floor {floor}, search NOT_FOUND", rep.tuples))
}

fn observable_dedup() -> Check {
    let n6 = enumerate_observables_dedup(6, 2).unwrap().len();
    ensure(n6 == 16 && observable_count_bound(6, 2) == 16, || format!("(6,2): {n6}"))?;
    let mut parts = vec![format!("(6,2): 16 = 16")];
    for (n, d) in [(4, 1), (5, 2), (9, 3)] {
        let k = enumerate_observables_dedup(n, d).unwrap().len();
        let bound = observable_count_bound(n, d);
        ensure(k as u128 <= bound, || format!("({n},{d}): {k} > {bound}"))?;
        parts.push(format!("({n},{d}): {k} <= {bound}"));
    }
    Ok(parts.join(", "))
}

fn classification() -> Check {
    let two = two_interval_task();
    for n in [32, 64] {
        let rep = classify_regions(&two, &FitBackend::Bernstein { n }).unwrap();
        ensure(rep.accuracy == 1.0 && rep.delta == 1.0, || format!("two-interval n={n}: {rep:?}"))?;
    }
    let three = three_square_task(7, 50);
    let accs: Vec<f64> = [8, 16, 32]
        .iter()
        .map(|&n| classify_regions(&three, &FitBackend::Bernstein { n }).unwrap().accuracy)
        .collect();
    ensure(accs[2] >= 0.95, || format!("three-square accuracy at n=32: {}", accs[2]))?;
    ensure(accs.windows(2).all(|w| w[1] >= w[0]), || format!("not nondecreasing: {accs:?}"))?;
    Ok(format!("two-interval 100% at n=32,64 (delta 1); three-square accuracy n=8,16,32: {accs:?} (delta 0.5)"))
}

fn gram_check(name: &str, gram: DMatrix<f64>, out: &mut Vec<String>) -> std::result::Result<(), String> {
    let asym = (&gram - gram.transpose()).amax();
    ensure(asym <= 1e-12, || format!("{name}: asymmetry {asym:e}"))?;
    let diag = gram.diagonal().iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    ensure(diag <= 1e-12, || format!("{name}: |k(x,x) - 1| = {diag:e}"))?;
    let min_eig = gram.symmetric_eigenvalues().min();
    ensure(min_eig >= -1e-9, || format!("{name}: min eigenvalue {min_eig:e}"))?;
    out.push(format!("{name} min eig {min_eig:.1e}"));
    Ok(())
}

fn kernel_sanity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut out = Vec::new();
    let mut specs = vec![("ARCCOS".to_string(), FeatureMapSpec::parallel_arccos(2, 5).unwrap())];
    for kind in [ActivationKind::Tanh, ActivationKind::Cosine, ActivationKind::PiecewiseSign] {
        specs.push((format!("{kind:?}"), FeatureMapSpec::parallel_activation(2, 6, kind, 4).unwrap()));
    }
    for (name, spec) in &specs {
        let pts: Vec<Vec<f64>> = (0..20).map(|_| random_point(&mut rng, 2)).collect();
        let gram = DMatrix::from_fn(20, 20, |i, k| spec.kernel(&pts[i], &pts[k], Evaluation::ClosedForm).unwrap());
        for (i, p) in pts.iter().enumerate().take(5) {
            let oracle = spec.kernel(p, &pts[(i + 1) % 20], Evaluation::Oracle).unwrap();
            let closed = gram[(i, (i + 1) % 20)];
            ensure((oracle - closed).abs() < 1e-10, || format!("{name}: oracle kernel {oracle} vs {closed}"))?;
        }
        gram_check(name, gram, &mut out)?;
    }
    let thetas: Vec<f64> = (0..20).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let seq = FeatureMapSpec::sequential(thetas).unwrap();
    let gram = DMatrix::from_fn(20, 20, |i, k| seq.kernel_sequential(i, k, 7, Evaluation::ClosedForm).unwrap());
    gram_check("SEQUENTIAL", gram, &mut out)?;
    Ok(out.join(", "))
}

fn config_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn read_dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

fn cli_determinism() -> Check {
    let mut configs: Vec<PathBuf> = std::fs::read_dir(config_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    configs.sort();
    ensure(configs.len() == 8, || format!("expected 8 configs, found {}", configs.len()))?;
    let mut files = 0;
    for cfg in &configs {
        let experiment = cfg.file_stem().unwrap().to_string_lossy().into_owned();
        let mut outputs = Vec::new();
        for threads in ["1", "0"] {
            let dir = tempfile::tempdir().unwrap();
            let status = Command::new(env!("CARGO_BIN_EXE_qfm-uap"))
                .arg(&experiment)
                .arg("--config")
                .arg(cfg)
                .arg("--out")
                .arg(dir.path())
                .env("QFM_UAP_THREADS", threads)
                .output()
                .unwrap();
            ensure(status.status.success(), || {
                format!("{experiment}: exit {:?}: {}", status.status.code(), String::from_utf8_lossy(&status.stderr))
            })?;
            outputs.push(read_dir_bytes(dir.path()));
        }
        ensure(outputs[0] == outputs[1], || format!("{experiment}: outputs differ between runs"))?;
        files += outputs[0].len();
    }
    Ok(format!("8 experiments, {files} files byte-identical across 1-thread and default-pool runs"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("oracle equivalence", 10, oracle_equivalence),
        ("exact polynomial representation", 5, exact_polynomials),
        ("Bernstein-quantum identity", 30, bernstein_quantum_identity),
        ("S4 bound holds", 20, s4_bound_holds),
        ("rate slope", 20, rate_slope),
        ("m(epsilon) closed form", 1, m_epsilon_closed_form),
        ("sequential UAP", 10, sequential_uap),
        ("impossibility", 1, impossibility),
        ("observable dedup", 1, observable_dedup),
        ("classification capability", 60, classification),
        ("kernel sanity", 5, kernel_sanity),
        ("CLI determinism", 120, cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs(*budget);
        let ok = result.is_ok() && within;
        if !ok {
            failed += 1;
        }
        let detail = match &result {
            Ok(s) | Err(s) => s,
        };
        let timing = if within { "" } else { " OVER BUDGET" };
        println!(
            "criterion {:>2} {} {name}: {detail} [{:.2}s of {budget}s{timing}]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
