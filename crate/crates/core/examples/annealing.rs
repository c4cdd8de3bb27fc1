//! Simulated annealing on a random 16-variable QUBO against brute force, and
//! the initial inverse temperatures for the full-size H2 encodings.
//!
//!     cargo run --release --example annealing

use fma_core::anneal::{initial_beta, qubo_energy, sample_batch, AnnealSchedule, SaBatchConfig};
use fma_core::codec::CodecSpec;
use fma_core::qubo::{normalize_qubo, QuboMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> fma_core::Result<()> {
    for spec in [
        CodecSpec::binary(2, 8)?,
        CodecSpec::one_hot(2, 64, -32, 1000.0)?,
        CodecSpec::domain_wall(2, 63, -32, 1000.0)?,
    ] {
        println!(
            "{:<11} d = {:<2} p = {:<6} beta_0 = 1/{}",
            spec.kind.name(),
            spec.d,
            spec.p,
            1.0 / initial_beta(&spec)?
        );
    }

    let n = 16;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut q = QuboMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            q.set(i, j, rng.random_range(-1.0..1.0));
        }
    }
    let q = normalize_qubo(&q);
    let exact = (0..1u32 << n)
        .map(|s| {
            let x: Vec<u8> = (0..n).map(|i| ((s >> i) & 1) as u8).collect();
            qubo_energy(&q, &x).unwrap()
        })
        .fold(f64::INFINITY, f64::min);

    let schedule = AnnealSchedule::new(1.0 / n as f64, 100.0, 100, 100)?;
    let batch = sample_batch(
        &q,
        &schedule,
        &SaBatchConfig {
            n_samples: 60,
            rng_seed: 9,
        },
    )?;
    let energies: Vec<f64> = batch.iter().map(|x| qubo_energy(&q, x).unwrap()).collect();
    let hits = energies.iter().filter(|&&e| e <= exact + 1e-12).count();
    println!("\nN = {n}: brute-force minimum {exact:.6}");
    println!(
        "60 SA samples: {hits} at the minimum, worst {:.6}",
        energies.iter().cloned().fold(f64::MIN, f64::max)
    );
    Ok(())
}
