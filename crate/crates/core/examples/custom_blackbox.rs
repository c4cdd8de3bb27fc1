//! The optimizer on a user-defined integer function: a tilted quadratic over
//! three variables, encoded as domain walls over [-8, 7].
//!
//!     cargo run --release --example custom_blackbox [seed]

use fma_core::codec::CodecSpec;
use fma_core::engine::{run_fma, BlackBox, FmaConfig};

struct Tilted;

impl BlackBox for Tilted {
    fn dimension(&self) -> usize {
        3
    }

    fn evaluate(&self, p: &[i64]) -> fma_core::Result<f64> {
        let (a, b, c) = (p[0] as f64, p[1] as f64, p[2] as f64);
        Ok((a - 3.0).powi(2) + 2.0 * (b + 5.0).powi(2) + (c - 1.0).powi(2) + 0.5 * a * c)
    }
}

fn main() -> fma_core::Result<()> {
    let seed: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("seed must be an integer"))
        .unwrap_or(1);
    let codec = CodecSpec::domain_wall(3, 15, -8, 10.0)?;
    let (lo, hi) = codec.range();
    let mut exact = f64::INFINITY;
    for a in lo..=hi {
        for b in lo..=hi {
            for c in lo..=hi {
                exact = exact.min(Tilted.evaluate(&[a, b, c])?);
            }
        }
    }
    println!("{} points, exact minimum {exact}", (hi - lo + 1).pow(3));

    let mut cfg = FmaConfig::new(codec, 4)?.with_seed(seed);
    cfg.max_samples = 120;
    let history = run_fma(&Tilted, &cfg)?;
    for it in history.iterations.iter().step_by(5) {
        println!(
            "iteration {:>3}: best {:>8.3} after {:>3} evaluations",
            it.iteration, it.best_cost, it.invocations
        );
    }
    println!(
        "stopped ({:?}) with {} at cost {}, first seen at evaluation {}",
        history.stop_reason,
        history.best.point,
        history.best.cost,
        history.first_hit_invocations(0.0)
    );
    Ok(())
}
