//! One- and two-electron integrals for H₂ in a minimal s-type basis.
//!
//! Primitive formulas are the standard closed forms for unnormalized
//! s Gaussians; the molecular orbitals are the symmetry-adapted combinations
//! `σg ∝ φ₁ + φ₂` and `σu ∝ φ₁ − φ₂`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::basis::{sto3g_hydrogen, ContractedS};
use super::boys::boys_f0;
use crate::error::{Error, Result};

pub const ANGSTROM_TO_BOHR: f64 = 1.889_725_988_6;

/// Two-index array over the two molecular orbitals (0 = σg, 1 = σu).
pub type Mat2 = [[f64; 2]; 2];
/// Chemists' notation `(pq|rs)` over the two molecular orbitals.
pub type Eri2 = [[[[f64; 2]; 2]; 2]; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MolecularIntegrals {
    /// Bond length in Ångström.
    pub bond_length: f64,
    /// Nuclear repulsion `1/R` in hartree, `R` in bohr.
    pub h0: f64,
    /// Overlap of the two atomic orbitals.
    pub s12: f64,
    pub h_spatial: Mat2,
    pub g_spatial: Eri2,
}

struct Ao {
    center: f64,
    shape: ContractedS,
}

fn overlap_prim(a: f64, xa: f64, b: f64, xb: f64) -> f64 {
    let p = a + b;
    (PI / p).powf(1.5) * (-a * b / p * (xa - xb).powi(2)).exp()
}

fn kinetic_prim(a: f64, xa: f64, b: f64, xb: f64) -> f64 {
    let p = a + b;
    let mu = a * b / p;
    let r2 = (xa - xb).powi(2);
    mu * (3.0 - 2.0 * mu * r2) * (PI / p).powf(1.5) * (-mu * r2).exp()
}

fn nuclear_prim(a: f64, xa: f64, b: f64, xb: f64, xc: f64, charge: f64) -> Result<f64> {
    let p = a + b;
    let xp = (a * xa + b * xb) / p;
    let pre = -2.0 * PI / p * charge * (-a * b / p * (xa - xb).powi(2)).exp();
    Ok(pre * boys_f0(p * (xp - xc).powi(2))?)
}

#[allow(clippy::too_many_arguments)]
fn eri_prim(a: f64, xa: f64, b: f64, xb: f64, c: f64, xc: f64, d: f64, xd: f64) -> Result<f64> {
    let p = a + b;
    let q = c + d;
    let xp = (a * xa + b * xb) / p;
    let xq = (c * xc + d * xd) / q;
    let pre = 2.0 * PI.powf(2.5) / (p * q * (p + q).sqrt())
        * (-a * b / p * (xa - xb).powi(2) - c * d / q * (xc - xd).powi(2)).exp();
    Ok(pre * boys_f0(p * q / (p + q) * (xp - xq).powi(2))?)
}

fn contract2(i: &Ao, j: &Ao, f: impl Fn(f64, f64, f64, f64) -> Result<f64>) -> Result<f64> {
    let mut s = 0.0;
    for pi in &i.shape.primitives {
        for pj in &j.shape.primitives {
            s += pi.weight * pj.weight * f(pi.exponent, i.center, pj.exponent, j.center)?;
        }
    }
    Ok(s)
}

fn contract_eri(i: &Ao, j: &Ao, k: &Ao, l: &Ao) -> Result<f64> {
    let mut s = 0.0;
    for pi in &i.shape.primitives {
        for pj in &j.shape.primitives {
            for pk in &k.shape.primitives {
                for pl in &l.shape.primitives {
                    let w = pi.weight * pj.weight * pk.weight * pl.weight;
                    s += w * eri_prim(
                        pi.exponent,
                        i.center,
                        pj.exponent,
                        j.center,
                        pk.exponent,
                        k.center,
                        pl.exponent,
                        l.center,
                    )?;
                }
            }
        }
    }
    Ok(s)
}

/// Fill all eight permutations of `(pq|rs)` from the canonical ones, so the
/// tensor symmetries hold bit-for-bit.
fn symmetric_eri(mut f: impl FnMut(usize, usize, usize, usize) -> Result<f64>) -> Result<Eri2> {
    let mut g = [[[[0.0; 2]; 2]; 2]; 2];
    for p in 0..2 {
        for q in 0..=p {
            for r in 0..2 {
                for s in 0..=r {
                    if p * 2 + q < r * 2 + s {
                        continue;
                    }
                    let v = f(p, q, r, s)?;
                    for (a, b, c, d) in [
                        (p, q, r, s),
                        (q, p, r, s),
                        (p, q, s, r),
                        (q, p, s, r),
                        (r, s, p, q),
                        (s, r, p, q),
                        (r, s, q, p),
                        (s, r, q, p),
                    ] {
                        g[a][b][c][d] = v;
                    }
                }
            }
        }
    }
    Ok(g)
}

/// Integrals at bond length `r_angstrom` using the given s function on both
/// atoms.
pub fn h2_integrals(r_angstrom: f64, shape: &ContractedS) -> Result<MolecularIntegrals> {
    if !(r_angstrom > 0.0) || !r_angstrom.is_finite() {
        return Err(Error::domain(format!(
            "bond length {r_angstrom} must be positive"
        )));
    }
    let r = r_angstrom * ANGSTROM_TO_BOHR;
    let centers = [0.0, r];
    let aos = [
        Ao {
            center: 0.0,
            shape: shape.clone(),
        },
        Ao {
            center: r,
            shape: shape.clone(),
        },
    ];

    let mut s_ao = [[0.0; 2]; 2];
    let mut h_ao = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in i..2 {
            let s = contract2(&aos[i], &aos[j], |a, xa, b, xb| {
                Ok(overlap_prim(a, xa, b, xb))
            })?;
            let t = contract2(&aos[i], &aos[j], |a, xa, b, xb| {
                Ok(kinetic_prim(a, xa, b, xb))
            })?;
            let mut v = 0.0;
            for &xc in &centers {
                v += contract2(&aos[i], &aos[j], |a, xa, b, xb| {
                    nuclear_prim(a, xa, b, xb, xc, 1.0)
                })?;
            }
            s_ao[i][j] = s;
            s_ao[j][i] = s;
            h_ao[i][j] = t + v;
            h_ao[j][i] = t + v;
        }
    }
    let g_ao = symmetric_eri(|p, q, r, s| contract_eri(&aos[p], &aos[q], &aos[r], &aos[s]))?;

    let s12 = s_ao[0][1];
    if !(s12 < 1.0) {
        return Err(Error::domain("atomic orbitals are linearly dependent"));
    }
    // columns: σg, σu
    let cg = 1.0 / (2.0 * (1.0 + s12)).sqrt();
    let cu = 1.0 / (2.0 * (1.0 - s12)).sqrt();
    let c = [[cg, cu], [cg, -cu]];

    let mut h_mo = [[0.0; 2]; 2];
    for p in 0..2 {
        for q in p..2 {
            let mut v = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    v += c[i][p] * c[j][q] * h_ao[i][j];
                }
            }
            h_mo[p][q] = v;
            h_mo[q][p] = v;
        }
    }
    let g_mo = symmetric_eri(|p, q, r, s| {
        let mut v = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        v += c[i][p] * c[j][q] * c[k][r] * c[l][s] * g_ao[i][j][k][l];
                    }
                }
            }
        }
        Ok(v)
    })?;

    Ok(MolecularIntegrals {
        bond_length: r_angstrom,
        h0: 1.0 / r,
        s12,
        h_spatial: h_mo,
        g_spatial: g_mo,
    })
}

/// STO-3G integrals from the shipped basis data.
pub fn sto3g_integrals(r_angstrom: f64) -> Result<MolecularIntegrals> {
    h2_integrals(r_angstrom, &sto3g_hydrogen())
}

/// Per-bond-length integral cache. Lookups are thread-safe; the computation
/// count is exposed so callers can verify reuse.
#[derive(Debug)]
pub struct IntegralCache {
    shape: ContractedS,
    entries: Mutex<HashMap<u64, Arc<MolecularIntegrals>>>,
    computed: AtomicUsize,
}

impl Default for IntegralCache {
    fn default() -> Self {
        Self::new(sto3g_hydrogen())
    }
}

impl IntegralCache {
    pub fn new(shape: ContractedS) -> Self {
        Self {
            shape,
            entries: Mutex::new(HashMap::new()),
            computed: AtomicUsize::new(0),
        }
    }

    pub fn get(&self, r_angstrom: f64) -> Result<Arc<MolecularIntegrals>> {
        let key = r_angstrom.to_bits();
        let mut map = self.entries.lock().expect("integral cache poisoned");
        if let Some(hit) = map.get(&key) {
            return Ok(Arc::clone(hit));
        }
        let ints = Arc::new(h2_integrals(r_angstrom, &self.shape)?);
        self.computed.fetch_add(1, Ordering::Relaxed);
        map.insert(key, Arc::clone(&ints));
        Ok(ints)
    }

    /// Number of integral evaluations performed (cache misses).
    pub fn computations(&self) -> usize {
        self.computed.load(Ordering::Relaxed)
    }
}
