//! Enumerate the discretized two-variable search space for its exact optimum,
//! the target the optimizer is judged against.
//!
//!     cargo run --release --example exhaustive_oracle

use fma_core::codec::{CodecSpec, Encoding};
use fma_core::h2::{H2Problem, IntegralCache, EQUILIBRIUM_BOND_LENGTH};
use fma_core::harness::exhaustive_oracle;

fn main() -> fma_core::Result<()> {
    let cache = IntegralCache::default();
    let problem = H2Problem::at_bond_length(&cache, EQUILIBRIUM_BOND_LENGTH, 2)?;
    for (kind, d) in [
        (Encoding::Binary, 4),
        (Encoding::Binary, 6),
        (Encoding::OneHot, 64),
        (Encoding::DomainWall, 63),
    ] {
        let spec = CodecSpec::new(kind, 2, d, CodecSpec::centered_offset(kind, d), 1000.0)?;
        let best = exhaustive_oracle(&problem, spec.range())?;
        println!(
            "{:<11} d = {d:<2} range {:?}: {:?} E = {:.13} Eh, {:.2e} above FCI ({} points)",
            kind.name(),
            spec.range(),
            best.point,
            best.energy,
            best.energy - problem.fci_energy(),
            best.points_evaluated
        );
    }
    Ok(())
}
