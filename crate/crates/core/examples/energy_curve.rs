//! A small experiment through the harness: the optimizer on the two-amplitude
//! H2 problem at several bond lengths, with results written to a CSV file.
//!
//!     cargo run --release --example energy_curve [output.csv]

use fma_core::harness::{run_experiment, ExperimentConfig};

fn main() -> fma_core::Result<()> {
    let output = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "energy_curve.csv".into());
    let cfg = ExperimentConfig::default().with_overrides(&[
        "encoding=\"domain-wall\"".to_owned(),
        "digits=[15]".to_owned(),
        "ranks=[4]".to_owned(),
        "penalties=[10.0]".to_owned(),
        "bond_lengths=[0.5, 0.7414, 1.0, 1.5, 2.0]".to_owned(),
        "n_runs=2".to_owned(),
        "max_samples=60".to_owned(),
        "schedule.n_steps=40".to_owned(),
        "schedule.sweeps_per_step=20".to_owned(),
        format!("output={}", toml::Value::String(output.clone())),
    ])?;
    let rows = run_experiment(&cfg, None)?;
    println!("bond length  run  best energy      error vs FCI  evaluations  point");
    for r in &rows {
        println!(
            "{:>11.4}  {:>3}  {:>15.10}  {:>12.3e}  {:>11}  {}",
            r.bond_length,
            r.run_id,
            r.best_energy,
            r.energy_error,
            r.cumulative_invocations,
            r.best_point
        );
    }
    println!("wrote {output}");
    Ok(())
}
