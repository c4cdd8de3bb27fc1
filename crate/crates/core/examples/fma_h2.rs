//! One optimizer run on the two-amplitude H2 problem with one-hot encoding.
//! The default width is small enough to finish in seconds; pass 64 for the
//! full [-32, 31] search space (several minutes per run).
//!
//!     cargo run --release --example fma_h2 [d] [seed]

use fma_core::codec::{CodecSpec, Encoding};
use fma_core::engine::{run_fma, FmaConfig};
use fma_core::h2::{H2Problem, IntegralCache, EQUILIBRIUM_BOND_LENGTH};
use fma_core::harness::exhaustive_oracle;

fn main() -> fma_core::Result<()> {
    let mut args = std::env::args().skip(1);
    let d: usize = args
        .next()
        .map(|s| s.parse().expect("d must be an integer"))
        .unwrap_or(16);
    let seed: u64 = args
        .next()
        .map(|s| s.parse().expect("seed must be an integer"))
        .unwrap_or(0);

    let cache = IntegralCache::default();
    let problem = H2Problem::at_bond_length(&cache, EQUILIBRIUM_BOND_LENGTH, 2)?;
    let codec = CodecSpec::one_hot(
        2,
        d,
        CodecSpec::centered_offset(Encoding::OneHot, d),
        1000.0,
    )?;
    let target = exhaustive_oracle(&problem, codec.range())?;
    println!(
        "search space {:?}^2, exact optimum {:?} at {:.12} Eh",
        codec.range(),
        target.point,
        target.energy
    );

    let mut cfg = FmaConfig::new(codec, 8)?.with_seed(seed);
    cfg.max_samples = 200;
    let h = run_fma(&problem, &cfg)?;
    for it in h.iterations.iter().filter(|it| it.iteration % 10 == 0) {
        println!(
            "iteration {:>3}: best {:.12} Eh, {:>4} evaluations, {} feasible SA samples",
            it.iteration, it.best_cost, it.invocations, it.n_feasible
        );
    }
    println!(
        "{:?}: best {} at {:.12} Eh ({:.2e} above the discretized optimum, {:.2e} above FCI)",
        h.stop_reason,
        h.best.point,
        h.best.cost,
        h.best.cost - target.energy,
        h.best.cost - problem.fci_energy()
    );
    Ok(())
}
