//! Reproduce a recorded run from a results file and compare it with the
//! stored row. Without arguments a one-run study is written first.
//!
//!     cargo run --release --example replay [results.csv] [run id]

use std::path::PathBuf;

use fma_core::harness::{replay_path, run_experiment, ExperimentConfig};

fn main() -> fma_core::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = match args.next() {
        Some(p) => PathBuf::from(p),
        None => {
            let path = std::env::temp_dir().join("fma_replay_example.csv");
            let cfg = ExperimentConfig::default().with_overrides(&[
                "digits=[12]".to_owned(),
                "ranks=[4]".to_owned(),
                "n_runs=1".to_owned(),
                "max_samples=40".to_owned(),
                "schedule.n_steps=40".to_owned(),
                "schedule.sweeps_per_step=20".to_owned(),
                format!("output={}", toml::Value::String(path.display().to_string())),
            ])?;
            run_experiment(&cfg, None)?;
            println!("recorded {}", path.display());
            path
        }
    };
    let run_id = args
        .next()
        .map(|s| s.parse().expect("run id must be an integer"))
        .unwrap_or(0);

    // A different pool size must not change the outcome.
    let r = replay_path(&path, run_id, Some(2))?;
    println!(
        "stored   {} E = {:.12} after {} evaluations",
        r.original.best_point, r.original.best_energy, r.original.cumulative_invocations
    );
    println!(
        "replayed {} E = {:.12} after {} evaluations",
        r.replayed.best_point, r.replayed.best_energy, r.replayed.cumulative_invocations
    );
    println!("{}", if r.matches() { "match" } else { "MISMATCH" });
    if !r.matches() {
        std::process::exit(3);
    }
    Ok(())
}
