//! Dense upper-triangular QUBO matrices.
//!
//! The energy of a bit vector `x` is `Σ_{i≤j} Q_ij x_i x_j`; the diagonal
//! carries the linear terms because `x_i² = x_i` for binary variables. A
//! constant offset rides along for bookkeeping but never enters `energy`.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuboMatrix {
    n_vars: usize,
    /// Row-major `n_vars × n_vars`; entries below the diagonal stay zero.
    coeffs: Vec<f64>,
    pub constant: f64,
}

impl QuboMatrix {
    pub fn zeros(n_vars: usize) -> Self {
        Self {
            n_vars,
            coeffs: vec![0.0; n_vars * n_vars],
            constant: 0.0,
        }
    }

    /// Build from a full row-major matrix. Entries below the diagonal must be
    /// zero and every entry finite.
    pub fn from_dense(n_vars: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_len(n_vars * n_vars, coeffs.len())?;
        for i in 0..n_vars {
            for j in 0..n_vars {
                let v = coeffs[i * n_vars + j];
                if !v.is_finite() {
                    return Err(Error::domain(format!("non-finite entry at ({i}, {j})")));
                }
                if i > j && v != 0.0 {
                    return Err(Error::domain(format!(
                        "entry ({i}, {j}) lies below the diagonal"
                    )));
                }
            }
        }
        Ok(Self {
            n_vars,
            coeffs,
            constant: 0.0,
        })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut coeffs = Vec::with_capacity(n * n);
        for row in rows {
            check_len(n, row.len())?;
            coeffs.extend_from_slice(row);
        }
        Self::from_dense(n, coeffs)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.coeffs[i * self.n_vars + j]
    }

    /// Add `value` to the coupling between `i` and `j`, folding `i > j` onto
    /// the upper triangle.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let (r, c) = if i <= j { (i, j) } else { (j, i) };
        self.coeffs[r * self.n_vars + c] += value;
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let (r, c) = if i <= j { (i, j) } else { (j, i) };
        self.coeffs[r * self.n_vars + c] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn energy(&self, x: &[u8]) -> Result<f64> {
        check_len(self.n_vars, x.len())?;
        let n = self.n_vars;
        let mut e = 0.0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let row = &self.coeffs[i * n..(i + 1) * n];
            for j in i..n {
                if x[j] != 0 {
                    e += row[j];
                }
            }
        }
        Ok(e)
    }

    /// Energy change from flipping bit `i`, in `O(n_vars)`.
    pub fn delta_energy(&self, x: &[u8], i: usize) -> Result<f64> {
        check_len(self.n_vars, x.len())?;
        if i >= self.n_vars {
            return Err(Error::domain(format!(
                "bit index {i} out of range for {} variables",
                self.n_vars
            )));
        }
        Ok(self.flip_delta_unchecked(x, i))
    }

    pub(crate) fn flip_delta_unchecked(&self, x: &[u8], i: usize) -> f64 {
        let n = self.n_vars;
        // field = dE/dx_i with the other bits held fixed
        let mut field = self.coeffs[i * n + i];
        for j in 0..i {
            if x[j] != 0 {
                field += self.coeffs[j * n + i];
            }
        }
        let row = &self.coeffs[i * n..(i + 1) * n];
        for j in i + 1..n {
            if x[j] != 0 {
                field += row[j];
            }
        }
        if x[i] == 0 {
            field
        } else {
            -field
        }
    }

    /// Divide every entry (and the constant) by the largest absolute entry.
    /// An all-zero matrix is returned unchanged.
    pub fn normalized(&self) -> Self {
        let m = self.max_abs();
        if m == 0.0 {
            return self.clone();
        }
        Self {
            n_vars: self.n_vars,
            coeffs: self.coeffs.iter().map(|v| v / m).collect(),
            constant: self.constant / m,
        }
    }

    /// `self + scale · other`, constants included.
    pub fn add_scaled(&self, other: &QuboMatrix, scale: f64) -> Result<Self> {
        check_len(self.n_vars, other.n_vars)?;
        Ok(Self {
            n_vars: self.n_vars,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + scale * b)
                .collect(),
            constant: self.constant + scale * other.constant,
        })
    }

    /// Full symmetric coupling matrix with a zero diagonal, plus the diagonal
    /// as a separate vector. This is the layout the annealer's local-field
    /// updates want.
    pub(crate) fn split_symmetric(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n_vars;
        let mut diag = vec![0.0; n];
        let mut sym = vec![0.0; n * n];
        for i in 0..n {
            diag[i] = self.coeffs[i * n + i];
            for j in i + 1..n {
                let v = self.coeffs[i * n + j];
                sym[i * n + j] = v;
                sym[j * n + i] = v;
            }
        }
        (diag, sym)
    }
}

/// Free-function form of [`QuboMatrix::normalized`].
pub fn normalize_qubo(q: &QuboMatrix) -> QuboMatrix {
    q.normalized()
}
