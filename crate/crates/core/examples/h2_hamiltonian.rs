//! The minimal-basis H2 benchmark: integrals, the 16 x 16 Hamiltonian, HF and
//! FCI energies, and the Rayleigh-quotient black box over integer vectors.
//!
//!     cargo run --example h2_hamiltonian [bond length in Angstrom]

use fma_core::engine::BlackBox;
use fma_core::h2::{H2Problem, IntegralCache, EQUILIBRIUM_BOND_LENGTH};
use fma_core::harness::fci_curve;

fn main() -> fma_core::Result<()> {
    let r: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("bond length must be a number"))
        .unwrap_or(EQUILIBRIUM_BOND_LENGTH);
    let cache = IntegralCache::default();
    let problem = H2Problem::at_bond_length(&cache, r, 2)?;
    let ints = problem.hamiltonian().integrals();
    println!("R = {r} A");
    println!(
        "  nuclear repulsion {:.10} Eh, overlap {:.10}",
        ints.h0, ints.s12
    );
    println!(
        "  h(sg,sg) {:.10}  h(su,su) {:.10}",
        ints.h_spatial[0][0], ints.h_spatial[1][1]
    );
    println!("  HF  {:.10} Eh", problem.hf_energy());
    println!("  FCI {:.10} Eh", problem.fci_energy());

    println!("\nblack box on (|1100>, |0011>) amplitudes:");
    for p in [[1, 0], [0, 1], [10, -1], [26, -3], [-26, 3]] {
        println!("  {p:?} -> {:.10}", problem.evaluate(&p)?);
    }

    println!("\nbond length, HF, FCI:");
    let grid: Vec<f64> = (0..10).map(|i| 0.4 + 0.2 * i as f64).collect();
    for pt in fci_curve(&grid)? {
        println!(
            "  {:.2}  {:.6}  {:.6}",
            pt.bond_length, pt.hf_energy, pt.fci_energy
        );
    }
    Ok(())
}
