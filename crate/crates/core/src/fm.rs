//! Second-order factorization machine over binary inputs.
//!
//! The model is `y(x) = c + Σ q_i x_i + Σ_{i<j} ⟨v_i, v_j⟩ x_i x_j`. With
//! binary `x` it is exactly a QUBO plus a constant, which is what lets an
//! annealer search the trained surrogate directly.
//!
//! Training is full-batch Adam on the mean squared error. Inputs are stored
//! as active-index lists during training: one-hot inputs have only `L`
//! active bits out of `L·d`, so this is the difference between microseconds
//! and milliseconds per update.

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::qubo::QuboMatrix;
use crate::seed::rng_from_seed;

/// FM parameters, stored flat as `[c, q_0..q_{N-1}, v_00..v_{N-1,k-1}]`.
///
/// The same shape doubles as the gradient type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FmParams {
    n: usize,
    k: usize,
    theta: Vec<f64>,
}

impl FmParams {
    pub fn zeros(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::config("FM needs at least one variable and rank ≥ 1"));
        }
        Ok(Self {
            n,
            k,
            theta: vec![0.0; 1 + n + n * k],
        })
    }

    /// `v` is row-major `n × k`.
    pub fn new(c: f64, q: Vec<f64>, v: Vec<f64>, k: usize) -> Result<Self> {
        let n = q.len();
        let mut p = Self::zeros(n, k)?;
        check_len(n * k, v.len())?;
        p.theta[0] = c;
        p.theta[1..1 + n].copy_from_slice(&q);
        p.theta[1 + n..].copy_from_slice(&v);
        if p.theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::domain("FM parameters must be finite"));
        }
        Ok(p)
    }

    /// Small random start: `c = q = 0`, `v ~ N(0, std²)`.
    pub fn random_init(n: usize, k: usize, std: f64, seed: u64) -> Result<Self> {
        let mut p = Self::zeros(n, k)?;
        let normal =
            Normal::new(0.0, std).map_err(|e| Error::config(format!("bad init std {std}: {e}")))?;
        let mut rng = rng_from_seed(seed);
        for t in &mut p.theta[1 + n..] {
            *t = normal.sample(&mut rng);
        }
        Ok(p)
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn c(&self) -> f64 {
        self.theta[0]
    }

    pub fn q(&self) -> &[f64] {
        &self.theta[1..1 + self.n]
    }

    pub fn v(&self, i: usize) -> &[f64] {
        let start = 1 + self.n + i * self.k;
        &self.theta[start..start + self.k]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.theta
    }

    /// Parameter count excluding the bias, `N(1+k)`; this is the figure
    /// usually quoted for FM model size.
    pub fn model_parameter_count(&self) -> usize {
        self.n * (1 + self.k)
    }

    fn v_offset(&self) -> usize {
        1 + self.n
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub max_updates: usize,
    pub target_mse: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    /// Standard deviation of the Gaussian factor-vector initialization.
    /// Factors of bits that never appear set in the data keep their initial
    /// values, so this sets how rugged the untrained part of the surrogate is.
    pub init_std: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            max_updates: 2000,
            target_mse: 1e-8,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            init_std: 0.1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) {
            return Err(Error::config("learning_rate must be positive"));
        }
        if !(0.0..1.0).contains(&self.adam_beta1) || !(0.0..1.0).contains(&self.adam_beta2) {
            return Err(Error::config("Adam betas must lie in [0, 1)"));
        }
        if !(self.adam_eps > 0.0) {
            return Err(Error::config("adam_eps must be positive"));
        }
        if self.max_updates == 0 {
            return Err(Error::config("max_updates must be positive"));
        }
        if !(self.init_std >= 0.0) || !self.init_std.is_finite() {
            return Err(Error::config("init_std must be finite and nonnegative"));
        }
        Ok(())
    }
}

pub fn fm_predict(x: &[u8], params: &FmParams) -> Result<f64> {
    check_len(params.n, x.len())?;
    let active: Vec<usize> = (0..x.len()).filter(|&i| x[i] != 0).collect();
    Ok(predict_sparse(params, &active, &mut vec![0.0; params.k]))
}

/// Uses `Σ_{i<j} ⟨v_i,v_j⟩ x_i x_j = ½ Σ_f [(Σ_i v_if x_i)² − Σ_i v_if² x_i]`.
/// `sums` receives the per-factor sums `Σ_i v_if x_i`.
fn predict_sparse(params: &FmParams, active: &[usize], sums: &mut [f64]) -> f64 {
    let q = params.q();
    let mut y = params.c();
    sums.iter_mut().for_each(|s| *s = 0.0);
    let mut sq = 0.0;
    for &i in active {
        y += q[i];
        for (s, &vf) in sums.iter_mut().zip(params.v(i)) {
            *s += vf;
            sq += vf * vf;
        }
    }
    let pair: f64 = sums.iter().map(|s| s * s).sum();
    y + 0.5 * (pair - sq)
}

pub fn fm_to_qubo(params: &FmParams) -> QuboMatrix {
    let n = params.n;
    let mut q = QuboMatrix::zeros(n);
    for i in 0..n {
        q.set(i, i, params.q()[i]);
        let vi = params.v(i);
        for j in i + 1..n {
            let dot: f64 = vi.iter().zip(params.v(j)).map(|(a, b)| a * b).sum();
            q.set(i, j, dot);
        }
    }
    q.constant = params.c();
    q
}

/// Gradient of `½·residual²` with respect to every parameter, where
/// `residual = fm_predict(x) − target`.
pub fn fm_gradient(params: &FmParams, x: &[u8], residual: f64) -> Result<FmParams> {
    check_len(params.n, x.len())?;
    let active: Vec<usize> = (0..x.len()).filter(|&i| x[i] != 0).collect();
    let mut sums = vec![0.0; params.k];
    predict_sparse(params, &active, &mut sums);
    let mut grad = FmParams::zeros(params.n, params.k)?;
    accumulate_gradient(params, &active, &sums, residual, &mut grad.theta);
    Ok(grad)
}

fn accumulate_gradient(
    params: &FmParams,
    active: &[usize],
    sums: &[f64],
    residual: f64,
    grad: &mut [f64],
) {
    let k = params.k;
    let voff = params.v_offset();
    grad[0] += residual;
    for &i in active {
        grad[1 + i] += residual;
        let vi = params.v(i);
        let g = &mut grad[voff + i * k..voff + (i + 1) * k];
        for f in 0..k {
            g[f] += residual * (sums[f] - vi[f]);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainOutcome {
    pub params: FmParams,
    /// MSE at the returned parameters.
    pub mse: f64,
    pub updates: usize,
}

/// Full-batch Adam on the mean squared error, from a fresh seeded start.
pub fn train_fm(
    samples: &[(Vec<u8>, f64)],
    k: usize,
    cfg: &TrainConfig,
    seed: u64,
) -> Result<TrainOutcome> {
    let n = samples
        .first()
        .map(|(x, _)| x.len())
        .ok_or_else(|| Error::config("cannot train on an empty sample set"))?;
    let init = FmParams::random_init(n, k, cfg.init_std, seed)?;
    train_fm_from(samples, init, cfg)
}

/// As [`train_fm`] but starting from the given parameters.
pub fn train_fm_from(
    samples: &[(Vec<u8>, f64)],
    init: FmParams,
    cfg: &TrainConfig,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    if samples.is_empty() {
        return Err(Error::config("cannot train on an empty sample set"));
    }
    let n = init.n;
    let mut data = Vec::with_capacity(samples.len());
    for (x, y) in samples {
        check_len(n, x.len())?;
        if !y.is_finite() {
            return Err(Error::domain("training target is not finite"));
        }
        let active: Vec<usize> = (0..n).filter(|&i| x[i] != 0).collect();
        data.push((active, *y));
    }

    let mut params = init;
    let dim = params.theta.len();
    let mut grad = vec![0.0; dim];
    let mut m = vec![0.0; dim];
    let mut v = vec![0.0; dim];
    let mut sums = vec![0.0; params.k];
    let scale = 2.0 / data.len() as f64;
    let mut updates = 0;
    let (b1, b2) = (cfg.adam_beta1, cfg.adam_beta2);
    let (mut b1t, mut b2t) = (1.0, 1.0);

    loop {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut sse = 0.0;
        for (active, y) in &data {
            let r = predict_sparse(&params, active, &mut sums) - y;
            sse += r * r;
            accumulate_gradient(&params, active, &sums, r, &mut grad);
        }
        let mse = sse / data.len() as f64;
        if mse <= cfg.target_mse || updates == cfg.max_updates {
            return Ok(TrainOutcome {
                params,
                mse,
                updates,
            });
        }

        updates += 1;
        b1t *= b1;
        b2t *= b2;
        let (c1, c2) = (1.0 - b1t, 1.0 - b2t);
        for idx in 0..dim {
            let g = grad[idx] * scale;
            m[idx] = b1 * m[idx] + (1.0 - b1) * g;
            v[idx] = b2 * v[idx] + (1.0 - b2) * g * g;
            let mhat = m[idx] / c1;
            let vhat = v[idx] / c2;
            params.theta[idx] -= cfg.learning_rate * mhat / (vhat.sqrt() + cfg.adam_eps);
        }
    }
}

/// Mean squared error of `params` on `samples`.
pub fn mse(samples: &[(Vec<u8>, f64)], params: &FmParams) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::config("empty sample set"));
    }
    let mut sse = 0.0;
    for (x, y) in samples {
        let r = fm_predict(x, params)? - y;
        sse += r * r;
    }
    Ok(sse / samples.len() as f64)
}
