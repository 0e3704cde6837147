//! Config-driven experiment runners.
//!
//! Each run produces `<out>/<experiment>.csv` and `<out>/<experiment>.json`;
//! `fit` and `bernstein` also write `<experiment>_model.json`.

mod config;
mod output;
mod results;
mod runners;
mod target;

pub use config::{
    BackendKind, ClassificationConfig, ExperimentConfig, ExperimentKind, GridSpec, OneOrMany, TaskKind,
    ToleranceConfig, SCHEMA_VERSION,
};
pub use output::{format_float, Cell, Table};
pub use results::*;
pub use runners::{
    emit_rate_curve, log_log_slope, model_file_name, run_experiment, slope_tail_len, ExperimentOutput,
    SEQUENTIAL_NOTE,
};
pub use target::{PolyTerm, TableEntry, TargetKind, TargetSpec};

use std::path::{Path, PathBuf};

use crate::error::Result;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_ASSERTION: u8 = 2;

/// Writes the CSV, the JSON summary and the optional model file; returns the
/// paths written.
pub fn write_outputs(kind: ExperimentKind, output: &ExperimentOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = vec![
        output::write_file(dir, &format!("{kind}.csv"), &output.table.to_csv_bytes()?)?,
        output::write_file(dir, &format!("{kind}.json"), &output::to_json_bytes(&output.summary)?)?,
    ];
    if let Some(model) = &output.model {
        paths.push(output::write_file(
            dir,
            &model_file_name(kind),
            &output::to_json_bytes(model)?,
        )?);
    }
    Ok(paths)
}

/// Command-line invocation parameters.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub experiment: ExperimentKind,
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub verbose: bool,
}

/// Loads the config, runs and writes outputs. Returns the exit status:
/// [`EXIT_OK`], [`EXIT_CONFIG`] for unusable input or I/O failure, or
/// [`EXIT_ASSERTION`] when a numerical check fails.
pub fn execute(inv: &Invocation) -> u8 {
    match try_execute(inv) {
        Ok(summary) if summary.pass => EXIT_OK,
        Ok(summary) => {
            for f in &summary.failures {
                eprintln!("assertion failed: {f}");
            }
            EXIT_ASSERTION
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

fn try_execute(inv: &Invocation) -> Result<Summary> {
    let mut cfg = ExperimentConfig::from_path(&inv.config)?;
    if cfg.experiment != inv.experiment {
        return Err(crate::Error::Configuration(format!(
            "command '{}' does not match config experiment '{}'",
            inv.experiment, cfg.experiment
        )));
    }
    if let Some(seed) = inv.seed {
        cfg.seed = seed;
    }
    let dir = inv
        .out
        .clone()
        .or_else(|| cfg.output_path.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let output = run_experiment(&cfg, inv.verbose)?;
    let paths = write_outputs(inv.experiment, &output, &dir)?;
    if inv.verbose {
        for p in paths {
            eprintln!("wrote {}", p.display());
        }
    }
    for w in &output.summary.warnings {
        eprintln!("warning: {w}");
    }
    Ok(output.summary)
}
