//! The four-phase surrogate loop: train an FM on every sample so far, anneal
//! its QUBO form (plus the encoding penalty), convert the annealer output to
//! new integer candidates, and evaluate those on the black box.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::anneal::{AnnealSchedule, Annealer, SaBatchConfig};
use crate::codec::{
    constraint_qubo, decode_point, encode_point, is_feasible, CodecSpec, IntegerPoint,
};
use crate::error::{Error, Result};
use crate::fm::{
    fm_predict, fm_to_qubo, train_fm, train_fm_from, FmParams, TrainConfig, TrainOutcome,
};
use crate::qubo::QuboMatrix;
use crate::seed::derive_seed;

/// An expensive function of integer variables.
pub trait BlackBox: Sync {
    fn dimension(&self) -> usize;

    /// Domain filter applied before evaluation; rejected points are never
    /// passed to [`BlackBox::evaluate`].
    fn is_admissible(&self, _point: &[i64]) -> bool {
        true
    }

    fn evaluate(&self, point: &[i64]) -> Result<f64>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub bits: Vec<u8>,
    pub point: IntegerPoint,
    pub cost: f64,
    pub iteration_found: usize,
}

/// Evaluated samples in evaluation order, keyed by bit vector.
#[derive(Debug, Clone, Default)]
pub struct SampleSet {
    records: Vec<SampleRecord>,
    seen: HashSet<Vec<u8>>,
}

impl SampleSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn contains(&self, bits: &[u8]) -> bool {
        self.seen.contains(bits)
    }

    pub fn records(&self) -> &[SampleRecord] {
        &self.records
    }

    pub fn push(&mut self, record: SampleRecord) -> Result<()> {
        if !self.seen.insert(record.bits.clone()) {
            return Err(Error::domain(format!(
                "sample {} is already in the set",
                record.point
            )));
        }
        self.records.push(record);
        Ok(())
    }

    pub fn training_data(&self) -> Vec<(Vec<u8>, f64)> {
        self.records
            .iter()
            .map(|r| (r.bits.clone(), r.cost))
            .collect()
    }

    pub fn best(&self) -> Option<&SampleRecord> {
        // first minimum wins ties, so the earliest evaluation is reported
        self.records
            .iter()
            .fold(None, |best: Option<&SampleRecord>, r| match best {
                Some(b) if b.cost <= r.cost => Some(b),
                _ => Some(r),
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FmaConfig {
    pub codec: CodecSpec,
    pub rank: usize,
    pub train: TrainConfig,
    pub schedule: AnnealSchedule,
    pub sa_batch: SaBatchConfig,
    pub n_select: usize,
    pub max_iterations: usize,
    pub max_samples: usize,
    pub stall_limit: usize,
    pub rng_seed: u64,
    /// Continue training from the previous iteration's parameters instead of
    /// a fresh initialization.
    pub warm_start: bool,
}

impl FmaConfig {
    /// Defaults: 60 SA samples, 3 selected per iteration, at most 1000
    /// iterations or 1000 samples, stop after 6 empty iterations.
    pub fn new(codec: CodecSpec, rank: usize) -> Result<Self> {
        let cfg = Self {
            schedule: AnnealSchedule::for_codec(&codec)?,
            codec,
            rank,
            train: TrainConfig::default(),
            sa_batch: SaBatchConfig::default(),
            n_select: 3,
            max_iterations: 1000,
            max_samples: 1000,
            stall_limit: 6,
            rng_seed: 0,
            warm_start: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::config("FM rank must be at least 1"));
        }
        self.train.validate()?;
        self.schedule.validate()?;
        if self.sa_batch.n_samples == 0 {
            return Err(Error::config("SA must produce at least one sample"));
        }
        if self.n_select == 0 || self.n_select > self.sa_batch.n_samples {
            return Err(Error::config(format!(
                "n_select must lie in 1..={}",
                self.sa_batch.n_samples
            )));
        }
        if self.stall_limit == 0 {
            return Err(Error::config("stall_limit must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxIterations,
    MaxSamples,
    Stalled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub best_cost: f64,
    pub invocations: usize,
    /// Distinct feasible bit vectors in the SA batch.
    pub n_feasible: usize,
    pub n_new: usize,
    /// `None` for iteration 0, which has no training step.
    pub train_mse: Option<f64>,
    pub train_updates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunHistory {
    /// Iteration 0 holds the initial samples.
    pub iterations: Vec<IterationRecord>,
    pub samples: Vec<SampleRecord>,
    pub best: SampleRecord,
    pub stop_reason: StopReason,
}

impl RunHistory {
    pub fn invocations(&self) -> usize {
        self.samples.len()
    }

    pub fn best_cost(&self) -> f64 {
        self.best.cost
    }

    /// Invocations needed until a cost within `tol` of the run's best was
    /// first seen.
    pub fn first_hit_invocations(&self, tol: f64) -> usize {
        self.samples
            .iter()
            .position(|s| s.cost <= self.best.cost + tol)
            .map_or(self.samples.len(), |i| i + 1)
    }
}

/// The canonical unit vectors `e_j`, one per variable, evaluated.
pub fn initial_samples(problem: &dyn BlackBox, codec: &CodecSpec) -> Result<Vec<SampleRecord>> {
    let l = problem.dimension();
    if l != codec.l {
        return Err(Error::Dimension {
            expected: codec.l,
            got: l,
        });
    }
    if !codec.contains(0) || !codec.contains(1) {
        let (lo, hi) = codec.range();
        return Err(Error::config(format!(
            "encoding range [{lo}, {hi}] must contain 0 and 1 for the initial samples"
        )));
    }
    (0..l)
        .map(|j| {
            let mut values = vec![0; l];
            values[j] = 1;
            let bits = encode_point(&values, codec)?;
            let cost = problem.evaluate(&values)?;
            Ok(SampleRecord {
                bits,
                point: IntegerPoint(values),
                cost,
                iteration_found: 0,
            })
        })
        .collect()
}

pub fn training_phase(
    samples: &SampleSet,
    cfg: &FmaConfig,
    iteration: usize,
    warm: Option<&FmParams>,
) -> Result<TrainOutcome> {
    let data = samples.training_data();
    match warm {
        Some(prev) if cfg.warm_start => train_fm_from(&data, prev.clone(), &cfg.train),
        _ => train_fm(
            &data,
            cfg.rank,
            &cfg.train,
            derive_seed(cfg.rng_seed, &[iteration as u64, 0]),
        ),
    }
}

/// `normalize(H_FM) + p·C`: the matrix handed to the annealer.
pub fn surrogate_hamiltonian(params: &FmParams, codec: &CodecSpec) -> Result<QuboMatrix> {
    let fm = fm_to_qubo(params).normalized();
    fm.add_scaled(&constraint_qubo(codec), codec.p)
}

pub fn sampling_phase(
    params: &FmParams,
    codec: &CodecSpec,
    schedule: &AnnealSchedule,
    sa_cfg: &SaBatchConfig,
) -> Result<Vec<Vec<u8>>> {
    let h = surrogate_hamiltonian(params, codec)?;
    Ok(Annealer::new(&h).sample_batch(schedule, sa_cfg))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub bits: Vec<u8>,
    pub point: IntegerPoint,
    /// Surrogate prediction used for ranking.
    pub predicted: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Conversion {
    pub candidates: Vec<Candidate>,
    /// Distinct feasible vectors in the raw batch.
    pub n_feasible: usize,
}

/// Dedupe, drop infeasible vectors, decode, apply the domain filter, drop
/// anything already evaluated, rank by surrogate value and keep `n_select`.
pub fn conversion_phase(
    raw: &[Vec<u8>],
    codec: &CodecSpec,
    sample_set: &SampleSet,
    params: &FmParams,
    n_select: usize,
    problem: &dyn BlackBox,
) -> Result<Conversion> {
    let mut seen = HashSet::new();
    let mut n_feasible = 0;
    let mut out = Vec::new();
    for bits in raw {
        if !seen.insert(bits.as_slice()) {
            continue;
        }
        if !is_feasible(bits, codec)? {
            continue;
        }
        n_feasible += 1;
        let point = decode_point(bits, codec)?;
        if !problem.is_admissible(point.values()) || sample_set.contains(bits) {
            continue;
        }
        out.push(Candidate {
            predicted: fm_predict(bits, params)?,
            bits: bits.clone(),
            point,
        });
    }
    // stable: ties keep SA output order
    out.sort_by(|a, b| a.predicted.total_cmp(&b.predicted));
    out.truncate(n_select);
    Ok(Conversion {
        candidates: out,
        n_feasible,
    })
}

/// One black-box call per candidate.
pub fn evaluation_phase(
    candidates: &[Candidate],
    problem: &dyn BlackBox,
    iteration: usize,
) -> Result<Vec<SampleRecord>> {
    candidates
        .iter()
        .map(|c| {
            let cost = problem.evaluate(c.point.values()).map_err(|e| {
                Error::domain(format!(
                    "black box failed on {} at iteration {iteration}: {e}",
                    c.point
                ))
            })?;
            Ok(SampleRecord {
                bits: c.bits.clone(),
                point: c.point.clone(),
                cost,
                iteration_found: iteration,
            })
        })
        .collect()
}

pub fn run_fma(problem: &dyn BlackBox, cfg: &FmaConfig) -> Result<RunHistory> {
    cfg.validate()?;
    let mut set = SampleSet::new();
    for r in initial_samples(problem, &cfg.codec)? {
        set.push(r)?;
    }
    let best_cost = |s: &SampleSet| s.best().map_or(f64::INFINITY, |b| b.cost);
    let mut iterations = vec![IterationRecord {
        iteration: 0,
        best_cost: best_cost(&set),
        invocations: set.len(),
        n_feasible: 0,
        n_new: set.len(),
        train_mse: None,
        train_updates: 0,
    }];

    let mut stall = 0;
    let mut prev: Option<FmParams> = None;
    let mut stop_reason = StopReason::MaxIterations;
    for iteration in 1..=cfg.max_iterations {
        if set.len() > cfg.max_samples {
            stop_reason = StopReason::MaxSamples;
            break;
        }
        let trained = training_phase(&set, cfg, iteration, prev.as_ref())?;
        let sa_cfg = SaBatchConfig {
            n_samples: cfg.sa_batch.n_samples,
            rng_seed: derive_seed(cfg.rng_seed, &[iteration as u64, 1]),
        };
        let raw = sampling_phase(&trained.params, &cfg.codec, &cfg.schedule, &sa_cfg)?;
        let conv = conversion_phase(
            &raw,
            &cfg.codec,
            &set,
            &trained.params,
            cfg.n_select,
            problem,
        )?;
        let new = evaluation_phase(&conv.candidates, problem, iteration)?;
        let n_new = new.len();
        for r in new {
            set.push(r)?;
        }
        iterations.push(IterationRecord {
            iteration,
            best_cost: best_cost(&set),
            invocations: set.len(),
            n_feasible: conv.n_feasible,
            n_new,
            train_mse: Some(trained.mse),
            train_updates: trained.updates,
        });
        prev = Some(trained.params);

        stall = if n_new == 0 { stall + 1 } else { 0 };
        if stall >= cfg.stall_limit {
            stop_reason = StopReason::Stalled;
            break;
        }
        if set.len() > cfg.max_samples {
            stop_reason = StopReason::MaxSamples;
            break;
        }
    }

    let best = set
        .best()
        .cloned()
        .ok_or_else(|| Error::domain("run produced no samples"))?;
    Ok(RunHistory {
        iterations,
        samples: set.records().to_vec(),
        best,
        stop_reason,
    })
}
