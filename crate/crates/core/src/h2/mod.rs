//! Minimal-basis H₂ benchmark: integrals, Fock-space Hamiltonian, and the
//! Rayleigh-quotient black box with its exact reference energies.

pub mod basis;
pub mod boys;
pub mod hamiltonian;
pub mod integrals;
pub mod problem;

pub use boys::boys_f0;
pub use hamiltonian::{
    build_hamiltonian, expectation, fci_energy, hf_energy, FockHamiltonian, DIM, HF_STATE,
    TWO_ELECTRON_STATES,
};
pub use integrals::{sto3g_integrals, IntegralCache, MolecularIntegrals, ANGSTROM_TO_BOHR};
pub use problem::{blackbox_eval, DimensionMask, H2Problem};

/// Equilibrium bond length used throughout the benchmark, in Ångström.
pub const EQUILIBRIUM_BOND_LENGTH: f64 = 0.7414;
