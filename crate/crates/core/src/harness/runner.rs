use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Cell, ExperimentConfig};
use super::results::{ResultRow, ResultWriter, ResultsFile};
use crate::codec::CodecSpec;
use crate::engine::{run_fma, BlackBox, RunHistory};
use crate::error::{Error, Result};
use crate::h2::{H2Problem, IntegralCache};
use crate::seed::derive_seed;

/// Largest per-variable range the exhaustive oracle accepts.
pub const ORACLE_MAX_VALUES: u64 = 256;

/// Seed of run `run` in cell `cell_index`. Runs of a cell share a prefix,
/// so the first `n` seeds do not depend on `n_runs`.
pub fn run_seed(base: u64, cell_index: usize, run: usize) -> u64 {
    derive_seed(base, &[cell_index as u64, run as u64])
}

fn render_point(values: &[i64]) -> String {
    values
        .iter()
        .map(i64::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

fn problem_for(cache: &IntegralCache, cell: &Cell) -> Result<H2Problem> {
    H2Problem::at_bond_length(cache, cell.bond_length, cell.dimension)
}

/// Run one seed of a cell and summarize it as a row.
pub fn run_cell(
    cfg: &ExperimentConfig,
    cell: &Cell,
    problem: &H2Problem,
    run_id: usize,
    seed: u64,
) -> Result<(RunHistory, ResultRow)> {
    let fma = cfg.fma_config(cell, seed)?;
    let start = Instant::now();
    let history = run_fma(problem, &fma)?;
    let wall_time = start.elapsed().as_secs_f64();
    let best = history.best_cost();
    let row = ResultRow {
        run_id,
        seed,
        bond_length: cell.bond_length,
        dimension: cell.dimension,
        encoding: cell.encoding,
        d: cell.d,
        k: cell.k,
        penalty: cell.penalty,
        iteration: history.iterations.last().map_or(0, |r| r.iteration),
        cumulative_invocations: history.invocations(),
        best_energy: best,
        energy_error: best - problem.fci_energy(),
        best_point: render_point(history.best.point.values()),
        first_hit_invocations: history.first_hit_invocations(cfg.first_hit_tol),
        stop_reason: history.stop_reason,
        cell_best: false,
        wall_time,
    };
    Ok((history, row))
}

fn mark_cell_best(rows: &mut [ResultRow], best_of: usize) {
    let pick =
        rows.iter()
            .take(best_of)
            .enumerate()
            .fold(None, |acc: Option<(usize, f64)>, (i, r)| match acc {
                Some((_, e)) if e <= r.best_energy => acc,
                _ => Some((i, r.best_energy)),
            });
    if let Some((i, _)) = pick {
        rows[i].cell_best = true;
    }
}

fn build_pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            return Err(Error::config("worker count must be at least 1"));
        }
        b = b.num_threads(n);
    }
    b.build()
        .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))
}

/// Run every cell of an FMA study, streaming rows to `out` cell by cell in
/// run-id order. Rows are identical for any worker count.
pub fn run_experiment_to<W: Write>(
    cfg: &ExperimentConfig,
    workers: Option<usize>,
    out: W,
) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    if !cfg.kind.runs_fma() {
        return Err(Error::config(format!(
            "{:?} does not run the optimizer; use the dedicated command",
            cfg.kind
        )));
    }
    let pool = build_pool(workers)?;
    let cache = IntegralCache::default();
    let mut writer = ResultWriter::new(out, cfg)?;
    let best_of = cfg.best_of.unwrap_or(cfg.n_runs);
    let mut all = Vec::new();
    for (ci, cell) in cfg.cells().iter().enumerate() {
        let problem = problem_for(&cache, cell)?;
        let mut rows = pool.install(|| {
            (0..cfg.n_runs)
                .into_par_iter()
                .map(|r| {
                    let seed = run_seed(cfg.seed, ci, r);
                    run_cell(cfg, cell, &problem, ci * cfg.n_runs + r, seed).map(|(_, row)| row)
                })
                .collect::<Result<Vec<_>>>()
        })?;
        mark_cell_best(&mut rows, best_of);
        writer.write_rows(&rows)?;
        all.extend(rows);
    }
    writer.into_inner()?;
    Ok(all)
}

/// [`run_experiment_to`] writing to `cfg.output`.
pub fn run_experiment(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<Vec<ResultRow>> {
    let file = std::fs::File::create(&cfg.output)
        .map_err(|e| Error::config(format!("cannot create {}: {e}", cfg.output.display())))?;
    run_experiment_to(cfg, workers, std::io::BufWriter::new(file))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub point: Vec<i64>,
    pub energy: f64,
    pub points_evaluated: usize,
}

/// Minimum of the black box over every nonzero point of `[lo, hi]²`. Ties go
/// to the first point in lexicographic order.
pub fn exhaustive_oracle(problem: &dyn BlackBox, range: (i64, i64)) -> Result<OracleResult> {
    if problem.dimension() != 2 {
        return Err(Error::config(format!(
            "exhaustive enumeration is limited to L = 2, got L = {}; use the property tests for larger spaces",
            problem.dimension()
        )));
    }
    let (lo, hi) = range;
    if lo > hi || (hi - lo + 1) as u64 > ORACLE_MAX_VALUES {
        return Err(Error::config(format!(
            "oracle range [{lo}, {hi}] must hold between 1 and {ORACLE_MAX_VALUES} values"
        )));
    }
    let mut best: Option<(Vec<i64>, f64)> = None;
    let mut count = 0;
    for a in lo..=hi {
        for b in lo..=hi {
            let p = [a, b];
            if !problem.is_admissible(&p) {
                continue;
            }
            let e = problem.evaluate(&p)?;
            count += 1;
            if best.as_ref().is_none_or(|(_, be)| e < *be) {
                best = Some((p.to_vec(), e));
            }
        }
    }
    let (point, energy) =
        best.ok_or_else(|| Error::domain("oracle range holds no admissible point"))?;
    Ok(OracleResult {
        point,
        energy,
        points_evaluated: count,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub bond_length: f64,
    pub min_value: i64,
    pub max_value: i64,
    pub point: String,
    pub energy: f64,
    pub fci_energy: f64,
    pub hf_energy: f64,
    /// `energy − fci_energy`; nonnegative.
    pub gap: f64,
}

/// Exhaustive optimum for every bond length and encoding range in `cfg`.
pub fn oracle_study<W: Write>(cfg: &ExperimentConfig, out: W) -> Result<Vec<OracleRow>> {
    cfg.validate()?;
    let cache = IntegralCache::default();
    let mut rows = Vec::new();
    for cell in cfg.cells() {
        let codec: CodecSpec = cfg.codec(&cell)?;
        let (lo, hi) = codec.range();
        if rows.iter().any(|o: &OracleRow| {
            o.bond_length == cell.bond_length && (o.min_value, o.max_value) == (lo, hi)
        }) {
            continue;
        }
        let problem = problem_for(&cache, &cell)?;
        let r = exhaustive_oracle(&problem, codec.range())?;
        rows.push(OracleRow {
            bond_length: cell.bond_length,
            min_value: lo,
            max_value: hi,
            point: render_point(&r.point),
            energy: r.energy,
            fci_energy: problem.fci_energy(),
            hf_energy: problem.hf_energy(),
            gap: r.energy - problem.fci_energy(),
        });
    }
    let mut w = ResultWriter::new(out, cfg)?;
    w.write_rows(&rows)?;
    w.into_inner()?;
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub bond_length: f64,
    pub hf_energy: f64,
    pub fci_energy: f64,
}

/// HF and FCI energies over a bond-length grid, in grid order.
pub fn fci_curve(bond_lengths: &[f64]) -> Result<Vec<CurvePoint>> {
    if bond_lengths.is_empty() {
        return Err(Error::config("bond-length grid must not be empty"));
    }
    let cache = IntegralCache::default();
    bond_lengths
        .iter()
        .map(|&r| {
            let p = H2Problem::at_bond_length(&cache, r, 2)?;
            Ok(CurvePoint {
                bond_length: r,
                hf_energy: p.hf_energy(),
                fci_energy: p.fci_energy(),
            })
        })
        .collect()
}

pub fn fci_curve_to<W: Write>(cfg: &ExperimentConfig, out: W) -> Result<Vec<CurvePoint>> {
    cfg.validate()?;
    let pts = fci_curve(&cfg.bond_lengths)?;
    let mut w = ResultWriter::new(out, cfg)?;
    w.write_rows(&pts)?;
    w.into_inner()?;
    Ok(pts)
}

#[derive(Debug, Clone)]
pub struct Replay {
    pub history: RunHistory,
    pub original: ResultRow,
    pub replayed: ResultRow,
}

impl Replay {
    /// Every column except wall time matches the recorded row.
    pub fn matches(&self) -> bool {
        let mut r = self.replayed.clone();
        r.cell_best = self.original.cell_best;
        r.same_outcome(&self.original)
    }
}

/// Re-run one recorded run from the configuration and seed in the file.
pub fn replay(file: &ResultsFile, run_id: usize, workers: Option<usize>) -> Result<Replay> {
    file.check_version()?;
    let original = file.row(run_id)?.clone();
    let cfg = &file.header.config;
    let cell = original.cell();
    let cache = IntegralCache::default();
    let problem = problem_for(&cache, &cell)?;
    let pool = build_pool(workers)?;
    let (history, replayed) =
        pool.install(|| run_cell(cfg, &cell, &problem, run_id, original.seed))?;
    Ok(Replay {
        history,
        original,
        replayed,
    })
}

pub fn replay_path(path: &Path, run_id: usize, workers: Option<usize>) -> Result<Replay> {
    replay(&ResultsFile::read(path)?, run_id, workers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::h2::EQUILIBRIUM_BOND_LENGTH;
    use crate::harness::ExperimentKind;

    fn tiny() -> ExperimentConfig {
        ExperimentConfig::default()
            .with_overrides(&[
                "digits=[8]",
                "ranks=[2]",
                "penalties=[10.0]",
                "n_runs=3",
                "max_iterations=4",
                "schedule.n_steps=10",
                "schedule.sweeps_per_step=5",
                "schedule.n_samples=10",
            ])
            .unwrap()
    }

    #[test]
    fn oracle_small_range_by_hand() {
        let cache = IntegralCache::default();
        let p = H2Problem::at_bond_length(&cache, EQUILIBRIUM_BOND_LENGTH, 2).unwrap();
        let r = exhaustive_oracle(&p, (-1, 1)).unwrap();
        assert_eq!(r.points_evaluated, 8);
        let manual = [
            [-1, -1],
            [-1, 0],
            [-1, 1],
            [0, -1],
            [0, 1],
            [1, -1],
            [1, 0],
            [1, 1],
        ]
        .iter()
        .map(|q| p.evaluate(q).unwrap())
        .fold(f64::INFINITY, f64::min);
        assert_eq!(r.energy, manual);
        assert!(r.energy >= p.fci_energy());
    }

    #[test]
    fn oracle_refuses_large_problems() {
        let cache = IntegralCache::default();
        let p6 = H2Problem::at_bond_length(&cache, 0.7414, 6).unwrap();
        assert!(matches!(
            exhaustive_oracle(&p6, (-1, 1)),
            Err(Error::Config(_))
        ));
        let p2 = H2Problem::at_bond_length(&cache, 0.7414, 2).unwrap();
        assert!(matches!(
            exhaustive_oracle(&p2, (-200, 200)),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn rows_follow_run_order_and_mark_best() {
        let cfg = tiny();
        let rows = run_experiment_to(&cfg, Some(2), Vec::new()).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.run_id).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
        assert_eq!(rows.iter().filter(|r| r.cell_best).count(), 1);
        let best = rows.iter().find(|r| r.cell_best).unwrap();
        assert!(rows.iter().all(|r| r.best_energy >= best.best_energy));
        assert!(rows.iter().all(|r| r.energy_error >= -1e-9));
    }

    #[test]
    fn fci_kind_is_not_an_fma_study() {
        let mut cfg = tiny();
        cfg.kind = ExperimentKind::FciCurve;
        assert!(matches!(
            run_experiment_to(&cfg, None, Vec::new()),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn curve_has_hf_above_fci() {
        let pts = fci_curve(&[0.5, 0.7414, 2.0]).unwrap();
        assert!(pts.iter().all(|p| p.hf_energy >= p.fci_energy));
        assert!(fci_curve(&[]).is_err());
    }
}
