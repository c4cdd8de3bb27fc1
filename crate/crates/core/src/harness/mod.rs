//! Seeded, replayable experiment runs over the H₂ benchmark.
//!
//! A study is an [`ExperimentConfig`] (TOML) describing a grid of cells. Each
//! cell is run `n_runs` times with seeds derived from the study seed, on a
//! worker pool, and written as one [`ResultRow`] per run to a CSV file whose
//! first line is a JSON header embedding the full configuration and crate
//! version. [`replay`] re-runs any row from that file alone.

pub mod config;
pub mod results;
pub mod runner;

pub use config::{preset, Cell, ExperimentConfig, ExperimentKind, ScheduleConfig, PRESETS};
pub use results::{Header, ResultRow, ResultWriter, ResultsFile, COLUMNS, VERSION};
pub use runner::{
    exhaustive_oracle, fci_curve, fci_curve_to, oracle_study, replay, replay_path, run_cell,
    run_experiment, run_experiment_to, run_seed, CurvePoint, OracleResult, OracleRow, Replay,
};

use crate::error::Error;

/// Environment variable holding the worker-pool size.
pub const WORKERS_ENV: &str = "FMA_WORKERS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Process exit code for an error: 2 for bad configuration, 3 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::OutOfRange { .. } => EXIT_CONFIG,
        _ => EXIT_RUNTIME,
    }
}
