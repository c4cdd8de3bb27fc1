//! Train a factorization machine on a hidden quadratic function of 10 bits,
//! export it as a QUBO and check that the QUBO minimizer is the true one.
//!
//!     cargo run --example fm_qubo

use fma_core::fm::{fm_predict, fm_to_qubo, train_fm, FmParams, TrainConfig};
use fma_core::qubo::normalize_qubo;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bits(s: u32, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((s >> i) & 1) as u8).collect()
}

fn main() -> fma_core::Result<()> {
    let n = 10;
    let k = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let hidden = FmParams::new(
        0.5,
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
        (0..n * k).map(|_| rng.random_range(-1.0..1.0)).collect(),
        k,
    )?;

    // 60 of the 1024 states as training data.
    let data: Vec<(Vec<u8>, f64)> = (0..60)
        .map(|_| {
            let x = bits(rng.random_range(0..1 << n), n);
            let y = fm_predict(&x, &hidden).unwrap();
            (x, y)
        })
        .collect();
    let out = train_fm(&data, k, &TrainConfig::default(), 1)?;
    println!(
        "trained: MSE {:.2e} after {} Adam updates",
        out.mse, out.updates
    );

    let q = fm_to_qubo(&out.params);
    let x = bits(0b1011001110, n);
    println!(
        "model {:.6} = QUBO energy {:.6} + constant {:.6}",
        fm_predict(&x, &out.params)?,
        q.energy(&x)?,
        q.constant
    );

    let argmin = |f: &dyn Fn(&[u8]) -> f64| {
        (0..1u32 << n)
            .min_by(|&a, &b| f(&bits(a, n)).total_cmp(&f(&bits(b, n))))
            .unwrap()
    };
    let norm = normalize_qubo(&q);
    let s_model = argmin(&|x| norm.energy(x).unwrap());
    let s_true = argmin(&|x| fm_predict(x, &hidden).unwrap());
    println!("normalized QUBO max |Q_ij| = {}", norm.max_abs());
    println!("QUBO argmin {s_model:010b}, true argmin {s_true:010b}");
    Ok(())
}
