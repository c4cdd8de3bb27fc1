//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use fma_core::h2::{FockHamiltonian, HF_STATE};

pub const DOUBLY_EXCITED: usize = 12;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// `(bond_length, hf, fci)` rows of the reference energy fixture.
pub fn reference_energies() -> Vec<(f64, f64, f64)> {
    let mut rdr = csv::Reader::from_path(fixture("h2_reference.csv")).unwrap();
    rdr.deserialize().map(|r| r.unwrap()).collect()
}

pub fn reference_integrals() -> HashMap<String, f64> {
    let mut rdr = csv::Reader::from_path(fixture("h2_integrals_0.7414.csv")).unwrap();
    rdr.deserialize::<(String, f64)>()
        .map(|r| r.unwrap())
        .collect()
}

/// Rayleigh quotient on span{|1100⟩, |0011⟩} written out as a 2×2 form.
pub fn two_state_energy(h: &FockHamiltonian, a: i64, b: i64) -> f64 {
    let (a, b) = (a as f64, b as f64);
    let (i, j) = (HF_STATE, DOUBLY_EXCITED);
    (a * a * h.get(i, i) + 2.0 * a * b * h.get(i, j) + b * b * h.get(j, j)) / (a * a + b * b)
}

/// Lowest two-state energy over the integer box `[lo, hi]²` minus the origin,
/// with every point attaining it.
pub fn discretized_optimum(h: &FockHamiltonian, lo: i64, hi: i64) -> (f64, Vec<(i64, i64)>) {
    let mut best = f64::INFINITY;
    let mut at = Vec::new();
    for a in lo..=hi {
        for b in lo..=hi {
            if (a, b) == (0, 0) {
                continue;
            }
            let e = two_state_energy(h, a, b);
            if e < best - 1e-15 {
                best = e;
                at = vec![(a, b)];
            } else if (e - best).abs() <= 1e-15 {
                at.push((a, b));
            }
        }
    }
    (best, at)
}
