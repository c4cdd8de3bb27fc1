//! Command-line front end for the experiment harness.
//!
//! Exit codes: 0 success, 2 configuration error, 3 runtime failure. The
//! worker-pool size comes from `FMA_WORKERS`.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fma_core::error::{Error, Result};
use fma_core::harness::{
    self, exit_code, fci_curve_to, oracle_study, preset, replay_path, run_experiment,
    ExperimentConfig, EXIT_RUNTIME, WORKERS_ENV,
};

#[derive(Parser)]
#[command(
    name = "fma",
    version,
    about = "Factorization-machine annealing on the H2 benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an optimization study and write one CSV row per run.
    Run(Source),
    /// Enumerate the discretized L = 2 search space for its exact optimum.
    Oracle(Source),
    /// Write HF and FCI energies over a bond-length grid.
    FciCurve(Source),
    /// Re-run one row of a results file and compare.
    Replay {
        /// Results file written by `fma run`.
        results: PathBuf,
        #[arg(long)]
        run_id: usize,
    },
}

#[derive(Args)]
struct Source {
    /// TOML experiment configuration.
    #[arg(long, short, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in study instead of a file.
    #[arg(long)]
    preset: Option<String>,
    /// Override any configuration key, e.g. `--set schedule.n_steps=50`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n_runs: Option<usize>,
    /// Output path; `oracle` and `fci-curve` print to stdout without it.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl Source {
    fn load(&self, default_preset: Option<&str>) -> Result<ExperimentConfig> {
        let base = match (&self.config, &self.preset, default_preset) {
            (Some(path), _, _) => ExperimentConfig::load(path)?,
            (None, Some(name), _) => preset(name)?,
            (None, None, Some(name)) => preset(name)?,
            (None, None, None) => ExperimentConfig::default(),
        };
        let mut sets = self.overrides.clone();
        if let Some(s) = self.seed {
            sets.push(format!("seed={s}"));
        }
        if let Some(n) = self.n_runs {
            sets.push(format!("n_runs={n}"));
        }
        if let Some(o) = &self.output {
            sets.push(format!(
                "output={}",
                toml::Value::String(o.display().to_string())
            ));
        }
        base.with_overrides(&sets)
    }
}

fn workers() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| Error::Config(format!("{WORKERS_ENV}={v:?} is not a positive integer"))),
        Err(_) => Ok(None),
    }
}

fn to_stdout_or_file<T>(
    path: Option<&PathBuf>,
    f: impl FnOnce(&mut dyn Write) -> Result<T>,
) -> Result<T> {
    match path {
        Some(p) => {
            let file = std::fs::File::create(p)
                .map_err(|e| Error::Config(format!("cannot create {}: {e}", p.display())))?;
            let mut w = io::BufWriter::new(file);
            f(&mut w)
        }
        None => f(&mut io::stdout().lock()),
    }
}

fn run(cli: Cli) -> Result<i32> {
    let workers = workers()?;
    match cli.command {
        Command::Run(src) => {
            let cfg = src.load(None)?;
            let rows = run_experiment(&cfg, workers)?;
            let best = rows
                .iter()
                .map(|r| r.energy_error)
                .fold(f64::INFINITY, f64::min);
            eprintln!(
                "{} runs written to {}; lowest energy error {best:.3e} Eh",
                rows.len(),
                cfg.output.display()
            );
        }
        Command::Oracle(src) => {
            let cfg = src.load(Some("oracle"))?;
            let rows = to_stdout_or_file(src.output.as_ref(), |w| oracle_study(&cfg, w))?;
            for r in &rows {
                eprintln!(
                    "R = {} A, range [{}, {}]: ({}) E = {:.10} Eh, gap to FCI {:.3e}",
                    r.bond_length, r.min_value, r.max_value, r.point, r.energy, r.gap
                );
            }
        }
        Command::FciCurve(src) => {
            let cfg = src.load(Some("fci-curve"))?;
            to_stdout_or_file(src.output.as_ref(), |w| fci_curve_to(&cfg, w))?;
        }
        Command::Replay { results, run_id } => {
            let r = replay_path(&results, run_id, workers)?;
            println!(
                "run {run_id}: recorded {} replayed {} ({} invocations)",
                r.original.best_energy, r.replayed.best_energy, r.replayed.cumulative_invocations
            );
            if !r.matches() {
                eprintln!("replay differs from the recorded row");
                return Ok(EXIT_RUNTIME);
            }
        }
    }
    Ok(harness::EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    });
    ExitCode::from(code as u8)
}
