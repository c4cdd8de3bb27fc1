//! The H₂ ground-state search exposed as an integer black-box function.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::hamiltonian::{
    build_hamiltonian, expectation, fci_energy, hf_energy, FockHamiltonian, DIM,
    DOUBLY_EXCITED_STATE, HF_STATE, TWO_ELECTRON_STATES,
};
use super::integrals::IntegralCache;
use crate::engine::BlackBox;
use crate::error::{check_len, Error, Result};

/// Which of the 16 state-vector components the integer variables occupy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionMask {
    indices: Vec<usize>,
}

impl DimensionMask {
    /// `L = 2`: `|1100⟩` and `|0011⟩`, the only components of the ground
    /// state. `L = 6`: the two-electron sector. `L = 16`: everything.
    pub fn reduced(l: usize) -> Result<Self> {
        let indices = match l {
            2 => vec![HF_STATE, DOUBLY_EXCITED_STATE],
            6 => TWO_ELECTRON_STATES.to_vec(),
            16 => (0..DIM).collect(),
            other => {
                return Err(Error::config(format!(
                    "search dimension must be 2, 6 or 16, got {other}"
                )))
            }
        };
        Ok(Self { indices })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Scatter integers into a full state vector.
    pub fn scatter(&self, point: &[i64]) -> Result<[f64; DIM]> {
        check_len(self.indices.len(), point.len())?;
        let mut phi = [0.0; DIM];
        for (&idx, &v) in self.indices.iter().zip(point) {
            phi[idx] = v as f64;
        }
        Ok(phi)
    }
}

/// Rayleigh quotient of the state whose masked components are `point`.
pub fn blackbox_eval(point: &[i64], mask: &DimensionMask, h: &FockHamiltonian) -> Result<f64> {
    if point.iter().all(|&v| v == 0) {
        return Err(Error::domain("the zero vector is not a quantum state"));
    }
    expectation(h, &mask.scatter(point)?)
}

#[derive(Debug, Clone)]
pub struct H2Problem {
    hamiltonian: Arc<FockHamiltonian>,
    mask: DimensionMask,
}

impl H2Problem {
    pub fn new(hamiltonian: Arc<FockHamiltonian>, mask: DimensionMask) -> Self {
        Self { hamiltonian, mask }
    }

    /// Build at bond length `r_angstrom`, reusing cached integrals.
    pub fn at_bond_length(cache: &IntegralCache, r_angstrom: f64, l: usize) -> Result<Self> {
        let ints = cache.get(r_angstrom)?;
        Ok(Self::new(
            Arc::new(build_hamiltonian(&ints)),
            DimensionMask::reduced(l)?,
        ))
    }

    pub fn hamiltonian(&self) -> &FockHamiltonian {
        &self.hamiltonian
    }

    pub fn mask(&self) -> &DimensionMask {
        &self.mask
    }

    pub fn fci_energy(&self) -> f64 {
        fci_energy(&self.hamiltonian)
    }

    pub fn hf_energy(&self) -> f64 {
        hf_energy(&self.hamiltonian)
    }

    /// Lowest eigenvalue within the masked subspace: the best any integer
    /// point can approach.
    pub fn subspace_minimum(&self) -> f64 {
        self.hamiltonian.lowest_eigenvalue(self.mask.indices())
    }
}

impl BlackBox for H2Problem {
    fn dimension(&self) -> usize {
        self.mask.len()
    }

    fn is_admissible(&self, point: &[i64]) -> bool {
        point.iter().any(|&v| v != 0)
    }

    fn evaluate(&self, point: &[i64]) -> Result<f64> {
        blackbox_eval(point, &self.mask, &self.hamiltonian)
    }
}
