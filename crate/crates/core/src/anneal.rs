//! Simulated annealing with heat-bath single-bit updates.
//!
//! Each sweep visits every bit once in a fresh random order and resamples it
//! from its conditional Boltzmann distribution. Local fields are maintained
//! incrementally, so a visit costs `O(1)` unless the bit actually flips.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{CodecSpec, Encoding};
use crate::error::{Error, Result};
use crate::qubo::QuboMatrix;
use crate::seed::derive_seed;

/// `Σ_{i≤j} Q_ij x_i x_j`, constant excluded.
pub fn qubo_energy(q: &QuboMatrix, x: &[u8]) -> Result<f64> {
    q.energy(x)
}

pub fn delta_energy(q: &QuboMatrix, x: &[u8], i: usize) -> Result<f64> {
    q.delta_energy(x, i)
}

/// Upper bound on `|ΔH|` for any single-bit flip of a normalized FM matrix
/// plus `p` times the encoding's constraint term.
pub fn delta_h_upper(spec: &CodecSpec) -> Result<f64> {
    let ld = (spec.l * spec.d) as f64;
    match spec.kind {
        Encoding::Binary => Ok(ld),
        Encoding::OneHot => {
            if spec.d < 2 {
                return Err(Error::config("one-hot flip bound requires d ≥ 2"));
            }
            Ok(ld + spec.p * (2 * spec.d - 3) as f64)
        }
        Encoding::DomainWall => Ok(ld + 2.0 * spec.p),
    }
}

/// Initial inverse temperature `1/ΔH_upper`.
pub fn initial_beta(spec: &CodecSpec) -> Result<f64> {
    Ok(1.0 / delta_h_upper(spec)?)
}

/// Probability of setting a bit to 1 given `e1 − e0`, the energy with the bit
/// set minus the energy with it cleared. Saturates instead of overflowing.
pub fn heat_bath_probability(beta: f64, e1_minus_e0: f64) -> f64 {
    if beta == 0.0 {
        return 0.5;
    }
    let x = beta * e1_minus_e0;
    if x.is_nan() {
        return 0.5;
    }
    // 1/(1+e^40) ≈ 4e-18 is below the resolution of a 53-bit uniform draw
    if x > 40.0 {
        0.0
    } else if x < -40.0 {
        1.0
    } else {
        1.0 / (1.0 + x.exp())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub beta_initial: f64,
    pub beta_final: f64,
    pub n_steps: usize,
    pub sweeps_per_step: usize,
}

impl AnnealSchedule {
    pub const DEFAULT_BETA_FINAL: f64 = 100.0;
    pub const DEFAULT_STEPS: usize = 100;
    pub const DEFAULT_SWEEPS: usize = 100;

    pub fn new(
        beta_initial: f64,
        beta_final: f64,
        n_steps: usize,
        sweeps_per_step: usize,
    ) -> Result<Self> {
        let s = Self {
            beta_initial,
            beta_final,
            n_steps,
            sweeps_per_step,
        };
        s.validate()?;
        Ok(s)
    }

    /// Default geometric schedule starting at `1/ΔH_upper` for the codec.
    pub fn for_codec(spec: &CodecSpec) -> Result<Self> {
        Self::new(
            initial_beta(spec)?,
            Self::DEFAULT_BETA_FINAL,
            Self::DEFAULT_STEPS,
            Self::DEFAULT_SWEEPS,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta_initial > 0.0) || !self.beta_final.is_finite() {
            return Err(Error::config(
                "inverse temperatures must be positive and finite",
            ));
        }
        if self.beta_initial > self.beta_final {
            return Err(Error::config("beta_initial must not exceed beta_final"));
        }
        if self.n_steps == 0 || self.sweeps_per_step == 0 {
            return Err(Error::config(
                "schedule needs at least one step and one sweep",
            ));
        }
        Ok(())
    }

    /// `β_t = β_0 (β_f/β_0)^{t/(n−1)}` for `t = 0…n−1`; a one-step schedule
    /// runs entirely at `β_f`.
    pub fn betas(&self) -> Vec<f64> {
        if self.n_steps == 1 {
            return vec![self.beta_final];
        }
        let ratio = self.beta_final / self.beta_initial;
        let last = (self.n_steps - 1) as f64;
        let mut out: Vec<f64> = (0..self.n_steps)
            .map(|t| self.beta_initial * ratio.powf(t as f64 / last))
            .collect();
        out[0] = self.beta_initial;
        out[self.n_steps - 1] = self.beta_final;
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaBatchConfig {
    pub n_samples: usize,
    pub rng_seed: u64,
}

impl Default for SaBatchConfig {
    fn default() -> Self {
        Self {
            n_samples: 60,
            rng_seed: 0,
        }
    }
}

/// A QUBO prepared for repeated annealing: diagonal plus full symmetric
/// couplings.
#[derive(Debug, Clone)]
pub struct Annealer {
    n: usize,
    diag: Vec<f64>,
    sym: Vec<f64>,
}

impl Annealer {
    pub fn new(q: &QuboMatrix) -> Self {
        let (diag, sym) = q.split_symmetric();
        Self {
            n: q.n_vars(),
            diag,
            sym,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn run<R: Rng + ?Sized>(&self, schedule: &AnnealSchedule, rng: &mut R) -> Vec<u8> {
        let n = self.n;
        let mut x: Vec<u8> = (0..n).map(|_| rng.random::<bool>() as u8).collect();
        if n == 0 {
            return x;
        }
        // field[i] = E(x_i = 1) − E(x_i = 0)
        let mut field = self.diag.clone();
        for j in 0..n {
            if x[j] != 0 {
                let row = &self.sym[j * n..(j + 1) * n];
                field.iter_mut().zip(row).for_each(|(f, s)| *f += s);
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        for beta in schedule.betas() {
            for _ in 0..schedule.sweeps_per_step {
                order.shuffle(rng);
                // A sweep in which every update was forced and nothing flipped
                // is a fixed point: β only grows, so every |βΔ| stays
                // saturated with the same sign for the rest of the schedule.
                let mut frozen = true;
                for &i in &order {
                    let p1 = heat_bath_probability(beta, field[i]);
                    let new = if p1 >= 1.0 {
                        1
                    } else if p1 <= 0.0 {
                        0
                    } else {
                        frozen = false;
                        u8::from(rng.random::<f64>() < p1)
                    };
                    if new != x[i] {
                        frozen = false;
                        x[i] = new;
                        let row = &self.sym[i * n..(i + 1) * n];
                        if new == 1 {
                            field.iter_mut().zip(row).for_each(|(f, s)| *f += s);
                        } else {
                            field.iter_mut().zip(row).for_each(|(f, s)| *f -= s);
                        }
                    }
                }
                if frozen {
                    return x;
                }
            }
        }
        x
    }

    /// Independent runs, each seeded from `cfg.rng_seed` and its index, in
    /// index order regardless of how the work is scheduled.
    pub fn sample_batch(&self, schedule: &AnnealSchedule, cfg: &SaBatchConfig) -> Vec<Vec<u8>> {
        (0..cfg.n_samples)
            .into_par_iter()
            .map(|r| {
                let mut rng =
                    Xoshiro256PlusPlus::seed_from_u64(derive_seed(cfg.rng_seed, &[r as u64]));
                self.run(schedule, &mut rng)
            })
            .collect()
    }
}

/// One annealing run from a uniform random start.
pub fn run_sa<R: Rng + ?Sized>(
    q: &QuboMatrix,
    schedule: &AnnealSchedule,
    rng: &mut R,
) -> Result<Vec<u8>> {
    schedule.validate()?;
    Ok(Annealer::new(q).run(schedule, rng))
}

pub fn sample_batch(
    q: &QuboMatrix,
    schedule: &AnnealSchedule,
    cfg: &SaBatchConfig,
) -> Result<Vec<Vec<u8>>> {
    schedule.validate()?;
    if cfg.n_samples == 0 {
        return Err(Error::config("n_samples must be at least 1"));
    }
    Ok(Annealer::new(q).sample_batch(schedule, cfg))
}
