//! Second-quantized H₂ Hamiltonian on the 16-dimensional Fock space.
//!
//! Spin orbitals are ordered `(σg↑, σg↓, σu↑, σu↓)` as modes `p = 0..4`, and
//! the occupation state `|n₀n₁n₂n₃⟩` has basis index `Σ n_p 2^p`. Fermionic
//! signs follow Jordan–Wigner ordering: an operator on mode `p` picks up
//! `(−1)^{Σ_{q<p} n_q}`.

use nalgebra::{DMatrix, SymmetricEigen};

use super::integrals::MolecularIntegrals;
use crate::error::{check_len, Error, Result};

pub const N_MODES: usize = 4;
pub const DIM: usize = 1 << N_MODES;

/// Basis indices of the six two-electron states, ascending.
pub const TWO_ELECTRON_STATES: [usize; 6] = [3, 5, 6, 9, 10, 12];
/// `|1100⟩`: both electrons in σg, the Hartree–Fock determinant.
pub const HF_STATE: usize = 3;
/// `|0011⟩`: both electrons in σu.
pub const DOUBLY_EXCITED_STATE: usize = 12;

fn spatial(p: usize) -> usize {
    p / 2
}

fn spin(p: usize) -> usize {
    p % 2
}

fn parity_below(state: usize, p: usize) -> f64 {
    if (state & ((1 << p) - 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn annihilate(state: usize, p: usize) -> Option<(usize, f64)> {
    (state & (1 << p) != 0).then(|| (state ^ (1 << p), parity_below(state, p)))
}

fn create(state: usize, p: usize) -> Option<(usize, f64)> {
    (state & (1 << p) == 0).then(|| (state | (1 << p), parity_below(state, p)))
}

/// Apply a string of operators right to left; `true` means creation.
fn apply(ops: &[(bool, usize)], state: usize) -> Option<(usize, f64)> {
    let mut s = state;
    let mut sign = 1.0;
    for &(is_create, p) in ops.iter().rev() {
        let (next, sg) = if is_create {
            create(s, p)?
        } else {
            annihilate(s, p)?
        };
        s = next;
        sign *= sg;
    }
    Some((s, sign))
}

pub fn electron_count(state: usize) -> u32 {
    state.count_ones()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockHamiltonian {
    matrix: [[f64; DIM]; DIM],
    integrals: MolecularIntegrals,
}

impl FockHamiltonian {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.matrix[row][col]
    }

    pub fn matrix(&self) -> &[[f64; DIM]; DIM] {
        &self.matrix
    }

    pub fn integrals(&self) -> &MolecularIntegrals {
        &self.integrals
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(DIM, DIM, |i, j| self.matrix[i][j])
    }

    /// Restriction of the matrix to the given basis states.
    pub fn block(&self, states: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(states.len(), states.len(), |i, j| {
            self.matrix[states[i]][states[j]]
        })
    }

    /// Lowest eigenvalue of the restriction to `states`.
    pub fn lowest_eigenvalue(&self, states: &[usize]) -> f64 {
        SymmetricEigen::new(self.block(states)).eigenvalues.min()
    }
}

/// Assemble `h₀ + Σ h_pq c†_p c_q + Σ h_pqrs c†_p c†_q c_r c_s` with
/// `h_pqrs = ½⟨pq|sr⟩`, i.e. `½ (ps|qr)` in chemists' notation.
pub fn build_hamiltonian(ints: &MolecularIntegrals) -> FockHamiltonian {
    let mut m = [[0.0; DIM]; DIM];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ints.h0;
    }
    let h = &ints.h_spatial;
    let g = &ints.g_spatial;

    for p in 0..N_MODES {
        for q in 0..N_MODES {
            if spin(p) != spin(q) {
                continue;
            }
            let coeff = h[spatial(p)][spatial(q)];
            for state in 0..DIM {
                if let Some((out, sign)) = apply(&[(true, p), (false, q)], state) {
                    m[out][state] += coeff * sign;
                }
            }
        }
    }

    for p in 0..N_MODES {
        for q in 0..N_MODES {
            for r in 0..N_MODES {
                for s in 0..N_MODES {
                    if spin(p) != spin(s) || spin(q) != spin(r) {
                        continue;
                    }
                    let coeff = 0.5 * g[spatial(p)][spatial(s)][spatial(q)][spatial(r)];
                    if coeff == 0.0 {
                        continue;
                    }
                    let ops = [(true, p), (true, q), (false, r), (false, s)];
                    for state in 0..DIM {
                        if let Some((out, sign)) = apply(&ops, state) {
                            m[out][state] += coeff * sign;
                        }
                    }
                }
            }
        }
    }

    FockHamiltonian {
        matrix: m,
        integrals: ints.clone(),
    }
}

/// Rayleigh quotient `⟨Φ|H|Φ⟩ / ⟨Φ|Φ⟩`.
pub fn expectation(h: &FockHamiltonian, phi: &[f64]) -> Result<f64> {
    check_len(DIM, phi.len())?;
    let norm: f64 = phi.iter().map(|v| v * v).sum();
    if norm == 0.0 {
        return Err(Error::domain("the zero vector is not a quantum state"));
    }
    let mut num = 0.0;
    for i in 0..DIM {
        if phi[i] == 0.0 {
            continue;
        }
        let row = &h.matrix[i];
        let hi: f64 = row.iter().zip(phi).map(|(a, b)| a * b).sum();
        num += phi[i] * hi;
    }
    Ok(num / norm)
}

/// Exact ground-state energy: lowest eigenvalue of the two-electron block.
pub fn fci_energy(h: &FockHamiltonian) -> f64 {
    h.lowest_eigenvalue(&TWO_ELECTRON_STATES)
}

/// Energy of the `|1100⟩` determinant.
pub fn hf_energy(h: &FockHamiltonian) -> f64 {
    h.matrix[HF_STATE][HF_STATE]
}
