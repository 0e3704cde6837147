use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use qfm_uap::experiments::{execute, ExperimentKind, Invocation, EXIT_CONFIG};

/// Runs quantum feature-map approximation experiments from a JSON config.
#[derive(Debug, Parser)]
#[command(name = "qfm-uap", version)]
struct Cli {
    /// oracle-check, fit, bernstein, rate-curve, sequential, counterexample,
    /// classify or dedup-count
    experiment: String,
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `output_path` in the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    verbose: bool,
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("QFM_UAP_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("QFM_UAP_THREADS must be a non-negative integer, got '{raw}'"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_CONFIG,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_CONFIG);
    }
    let experiment = match cli.experiment.parse::<ExperimentKind>() {
        Ok(k) => k,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    ExitCode::from(execute(&Invocation {
        experiment,
        config: cli.config,
        out: cli.out,
        seed: cli.seed,
        verbose: cli.verbose,
    }))
}
