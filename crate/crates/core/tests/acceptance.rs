//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run all criteria with `cargo test --test acceptance`, or a subset with
//! `cargo test --test acceptance -- 1 4 6`. Exits nonzero if any selected
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::{discretized_optimum, reference_energies};
use fma_core::anneal::{delta_energy, delta_h_upper, qubo_energy, run_sa, AnnealSchedule};
use fma_core::codec::{
    constraint_qubo, decode_point, encode, is_feasible, render_bits, CodecSpec, Encoding,
};
use fma_core::engine::{surrogate_hamiltonian, RunHistory};
use fma_core::fm::{fm_predict, fm_to_qubo, FmParams};
use fma_core::h2::{
    build_hamiltonian, fci_energy, hf_energy, sto3g_integrals, H2Problem, IntegralCache,
    EQUILIBRIUM_BOND_LENGTH,
};
use fma_core::harness::runner::run_cell;
use fma_core::harness::{
    preset, replay, run_experiment_to, ExperimentConfig, ResultRow, ResultsFile,
};
use fma_core::qubo::{normalize_qubo, QuboMatrix};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64, detail: String) -> Outcome {
    let t = elapsed.as_secs_f64();
    if t < limit_s {
        Ok(detail)
    } else {
        Err(format!("{detail}; took {t:.1} s, limit {limit_s} s"))
    }
}

fn bits_of(s: u32, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((s >> i) & 1) as u8).collect()
}

fn c1_encoding_tables() -> Outcome {
    let t = Instant::now();
    let rows: [(Encoding, usize, i64, [&str; 4]); 3] = [
        (Encoding::Binary, 2, 0, ["10", "11", "00", "01"]),
        (Encoding::OneHot, 4, -2, ["1000", "0100", "0010", "0001"]),
        (Encoding::DomainWall, 3, -2, ["000", "100", "110", "111"]),
    ];
    let mut checked = 0;
    for (kind, d, n0, printed) in rows {
        let spec = CodecSpec::new(kind, 1, d, n0, 1.0).map_err(|e| e.to_string())?;
        for (n, s) in (-2..=1).zip(printed) {
            let bits = encode(n, &spec).map_err(|e| e.to_string())?;
            ensure(render_bits(&bits, kind) == s, || {
                format!("{kind} {n} prints wrong")
            })?;
            let back = decode_point(&bits, &spec).map_err(|e| e.to_string())?;
            ensure(back.values() == [n], || {
                format!("{kind} {n} decodes to {back}")
            })?;
            checked += 1;
        }
    }
    let mut round_trips = 0u64;
    for kind in [Encoding::Binary, Encoding::OneHot, Encoding::DomainWall] {
        let max_d = if kind == Encoding::Binary { 8 } else { 16 };
        for d in 1..=max_d {
            let spec = CodecSpec::new(kind, 1, d, CodecSpec::centered_offset(kind, d), 1.0)
                .map_err(|e| e.to_string())?;
            let (lo, hi) = spec.range();
            for n in lo..=hi {
                let bits = encode(n, &spec).map_err(|e| e.to_string())?;
                let back = decode_point(&bits, &spec).map_err(|e| e.to_string())?;
                ensure(back.values() == [n], || {
                    format!("{kind} d={d} n={n} round-trips to {back}")
                })?;
                round_trips += 1;
            }
        }
    }
    within(
        t.elapsed(),
        1.0,
        format!("{checked} table rows, {round_trips} round trips"),
    )
}

fn c2_fm_qubo_identity() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut states = 0u64;
    for n in 1..=12 {
        // Parameters on a 1/8 grid keep every partial sum exact.
        let mut g = |lo: i32, hi: i32| rng.random_range(lo..=hi) as f64 / 8.0;
        let q = (0..n).map(|_| g(-16, 16)).collect();
        let v = (0..n * 4).map(|_| g(-8, 8)).collect();
        let p = FmParams::new(g(-8, 8), q, v, 4).map_err(|e| e.to_string())?;
        let h = fm_to_qubo(&p);
        for s in 0..1u32 << n {
            let x = bits_of(s, n);
            let a = fm_predict(&x, &p).map_err(|e| e.to_string())?;
            let b = h.energy(&x).map_err(|e| e.to_string())? + h.constant;
            ensure(a == b, || format!("N={n} state {s}: {a} vs {b}"))?;
            states += 1;
        }
    }
    let n = 128;
    let p = FmParams::new(
        rng.random_range(-1.0..1.0),
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
        (0..n * 8).map(|_| rng.random_range(-1.0..1.0)).collect(),
        8,
    )
    .map_err(|e| e.to_string())?;
    let h = fm_to_qubo(&p);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let x: Vec<u8> = (0..n).map(|_| rng.random::<bool>() as u8).collect();
        let a = fm_predict(&x, &p).map_err(|e| e.to_string())?;
        let b = h.energy(&x).map_err(|e| e.to_string())? + h.constant;
        worst = worst.max((a - b).abs());
    }
    ensure(worst <= 1e-10, || format!("N=128 deviation {worst:e}"))?;
    within(
        t.elapsed(),
        10.0,
        format!("{states} exact states for N <= 12; N=128 max deviation {worst:.1e}"),
    )
}

fn c3_constraint_correctness() -> Outcome {
    let t = Instant::now();
    let mut states = 0u64;
    for kind in [Encoding::OneHot, Encoding::DomainWall] {
        for l in 1..=16usize {
            for d in 1..=16 / l {
                let spec = CodecSpec::new(kind, l, d, 0, 1.0).map_err(|e| e.to_string())?;
                let q = constraint_qubo(&spec);
                let n = l * d;
                for s in 0..1u32 << n {
                    let x = bits_of(s, n);
                    let e = q.energy(&x).map_err(|e| e.to_string())? + q.constant;
                    let direct: f64 = x
                        .chunks(d)
                        .map(|c| match kind {
                            Encoding::OneHot => {
                                (c.iter().map(|&b| b as f64).sum::<f64>() - 1.0).powi(2)
                            }
                            _ => {
                                let mut walls = 0.0;
                                for i in 1..d {
                                    let (a, b) = (c[i - 1] as f64, c[i] as f64);
                                    walls += b - a * b;
                                }
                                2.0 * walls
                            }
                        })
                        .sum();
                    ensure(e == direct, || {
                        format!("{kind} L={l} d={d} state {s}: {e} vs {direct}")
                    })?;
                    let feasible = is_feasible(&x, &spec).map_err(|e| e.to_string())?;
                    ensure((e == 0.0) == feasible, || {
                        format!("{kind} L={l} d={d} state {s}: zero/feasible mismatch")
                    })?;
                    if kind == Encoding::DomainWall {
                        ensure(e % 2.0 == 0.0, || format!("odd domain-wall energy {e}"))?;
                    }
                    states += 1;
                }
            }
        }
    }
    within(t.elapsed(), 5.0, format!("{states} bit vectors"))
}

fn c4_flip_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut report = Vec::new();
    for (kind, d, p) in [
        (Encoding::Binary, 8, 0.0),
        (Encoding::OneHot, 64, 1000.0),
        (Encoding::OneHot, 16, 1.0),
        (Encoding::DomainWall, 63, 1000.0),
        (Encoding::DomainWall, 15, 1.0),
    ] {
        let spec = CodecSpec::new(kind, 2, d, 0, p).map_err(|e| e.to_string())?;
        let n = spec.total_bits();
        let bound = delta_h_upper(&spec).map_err(|e| e.to_string())?;
        let (mut flips, mut violations, mut worst) = (0u64, 0u64, 0.0f64);
        for _ in 0..25 {
            let k = rng.random_range(1..=8);
            let params = FmParams::new(
                0.0,
                (0..n).map(|_| rng.random_range(-5.0..5.0)).collect(),
                (0..n * k).map(|_| rng.random_range(-2.0..2.0)).collect(),
                k,
            )
            .map_err(|e| e.to_string())?;
            let h = surrogate_hamiltonian(&params, &spec).map_err(|e| e.to_string())?;
            for _ in 0..4_000 {
                let density = rng.random_range(0.0..1.0);
                let x: Vec<u8> = (0..n).map(|_| rng.random_bool(density) as u8).collect();
                let de = delta_energy(&h, &x, rng.random_range(0..n))
                    .map_err(|e| e.to_string())?
                    .abs();
                worst = worst.max(de / bound);
                violations += u64::from(de > bound);
                flips += 1;
            }
        }
        ensure(violations == 0, || {
            format!("{kind} d={d} p={p}: {violations} violations")
        })?;
        report.push(format!(
            "{kind} d={d} p={p}: {flips} flips, max |dH|/bound {worst:.3}"
        ));
    }
    Ok(report.join("; "))
}

fn brute_force_min(q: &QuboMatrix) -> f64 {
    let n = q.n_vars();
    let mut x = vec![0u8; n];
    let (mut e, mut best) = (0.0, 0.0f64);
    for k in 1u64..1 << n {
        let i = k.trailing_zeros() as usize;
        let mut d = q.get(i, i);
        for j in 0..n {
            if j != i && x[j] == 1 {
                d += if j < i { q.get(j, i) } else { q.get(i, j) };
            }
        }
        e += if x[i] == 1 { -d } else { d };
        x[i] ^= 1;
        best = best.min(e);
    }
    best
}

fn c5_sa_quality() -> Outcome {
    let t = Instant::now();
    let n = 16;
    let schedule =
        AnnealSchedule::new(1.0 / n as f64, 100.0, 100, 100).map_err(|e| e.to_string())?;
    let hits: usize = (0..100u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(5000 + trial);
            let mut q = QuboMatrix::zeros(n);
            for i in 0..n {
                for j in i..n {
                    q.set(i, j, rng.random_range(-1.0..1.0));
                }
            }
            let q = normalize_qubo(&q);
            let min = brute_force_min(&q);
            let x = run_sa(&q, &schedule, &mut rng).unwrap();
            usize::from(qubo_energy(&q, &x).unwrap() <= min + 1e-12)
        })
        .sum();
    ensure(hits >= 90, || format!("ground state in {hits}/100 runs"))?;
    within(
        t.elapsed(),
        120.0,
        format!("ground state in {hits}/100 runs"),
    )
}

fn c6_chemistry() -> Outcome {
    let t = Instant::now();
    let refs = reference_energies();
    let (_, hf_ref, fci_ref) = *refs
        .iter()
        .find(|r| r.0 == EQUILIBRIUM_BOND_LENGTH)
        .ok_or("fixture lacks the equilibrium row")?;
    let h =
        build_hamiltonian(&sto3g_integrals(EQUILIBRIUM_BOND_LENGTH).map_err(|e| e.to_string())?);
    let (hf, fci) = (hf_energy(&h), fci_energy(&h));
    ensure((fci - fci_ref).abs() <= 2e-3, || {
        format!("FCI {fci} vs reference {fci_ref}")
    })?;
    ensure((hf - hf_ref).abs() <= 2e-3, || {
        format!("HF {hf} vs reference {hf_ref}")
    })?;
    let grid = preset("fci-curve").map_err(|e| e.to_string())?.bond_lengths;
    let mut best = (f64::NAN, f64::INFINITY);
    for &r in &grid {
        let h = build_hamiltonian(&sto3g_integrals(r).map_err(|e| e.to_string())?);
        let (hf, fci) = (hf_energy(&h), fci_energy(&h));
        ensure(hf >= fci, || format!("HF below FCI at {r}"))?;
        if fci < best.1 {
            best = (r, fci);
        }
    }
    ensure((0.70..=0.78).contains(&best.0), || {
        format!("FCI minimum at {} A", best.0)
    })?;
    within(
        t.elapsed(),
        10.0,
        format!(
            "FCI {fci:.6} (ref {fci_ref:.6}), HF {hf:.6} (ref {hf_ref:.6}); minimum at {} A over {} points",
            best.0,
            grid.len()
        ),
    )
}

struct SeedRun {
    history: RunHistory,
    row: ResultRow,
}

/// Ten seeds of one cell in parallel, in seed order.
fn ten_seeds(cfg: &ExperimentConfig) -> Result<(Vec<SeedRun>, H2Problem), String> {
    let cell = cfg.cells()[0];
    let cache = IntegralCache::default();
    let problem = H2Problem::at_bond_length(&cache, cell.bond_length, cell.dimension)
        .map_err(|e| e.to_string())?;
    let runs = (0..cfg.n_runs)
        .into_par_iter()
        .map(|r| {
            let seed = fma_core::harness::runner::run_seed(cfg.seed, 0, r);
            run_cell(cfg, &cell, &problem, r, seed).map(|(history, row)| SeedRun { history, row })
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok((runs, problem))
}

/// Criteria 7 and 9 share the same ten runs.
fn c7_c9_one_hot() -> (Outcome, Outcome) {
    let t = Instant::now();
    let cfg = ExperimentConfig::default();
    let (runs, problem) = match ten_seeds(&cfg) {
        Ok(r) => r,
        Err(e) => return (Err(e.clone()), Err(e)),
    };
    let elapsed = t.elapsed();
    let (e2, _) = discretized_optimum(problem.hamiltonian(), -32, 31);
    let hf = problem.hf_energy();

    let errors: Vec<f64> = runs.iter().map(|r| r.history.best_cost() - e2).collect();
    let best_err = errors.iter().cloned().fold(f64::INFINITY, f64::min);
    let initial: Vec<f64> = runs
        .iter()
        .map(|r| r.history.iterations[0].best_cost)
        .collect();
    let regressions = runs
        .iter()
        .zip(&initial)
        .filter(|(r, &i)| r.history.best_cost() > i)
        .count();
    let detail = format!(
        "E2* = {e2:.10}; best-of-10 error {best_err:.2e} Eh; per-run errors [{}]; HF {hf:.6}; invocations [{}]",
        errors.iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>().join(", "),
        runs.iter().map(|r| r.row.cumulative_invocations.to_string()).collect::<Vec<_>>().join(", ")
    );
    let c7 = if best_err > 1e-6 {
        Err(format!("{detail}; best-of-10 error above 1e-6"))
    } else if regressions > 0 || runs.iter().any(|r| r.history.best_cost() > hf) {
        Err(format!(
            "{detail}; {regressions} runs ended above their initial cost"
        ))
    } else {
        within(elapsed, 600.0, detail)
    };

    let hits: Vec<usize> = runs
        .iter()
        .filter_map(|r| {
            r.history
                .samples
                .iter()
                .position(|s| s.cost <= e2 + 1e-6)
                .map(|i| i + 1)
        })
        .collect();
    let c9 = if hits.is_empty() {
        Err("no run reached a low-error solution".to_owned())
    } else {
        let max = *hits.iter().max().unwrap();
        let detail = format!(
            "{} of 10 runs within 1e-6 of E2*; first-hit invocations {hits:?}",
            hits.len()
        );
        if max <= 1000 {
            Ok(detail)
        } else {
            Err(detail)
        }
    };
    (c7, c9)
}

fn c8_domain_wall_failure() -> Outcome {
    let t = Instant::now();
    let mut cfg = ExperimentConfig::default();
    cfg.encoding = Encoding::DomainWall;
    cfg.digits = vec![63];
    cfg.penalties = vec![1.0];
    let (runs, _) = ten_seeds(&cfg)?;
    let mut feasible_total = 0;
    for r in &runs {
        let h = &r.history;
        let new_after_start: usize = h.iterations[1..].iter().map(|i| i.n_new).sum();
        feasible_total += h.iterations[1..]
            .iter()
            .map(|i| i.n_feasible)
            .sum::<usize>();
        ensure(new_after_start == 0, || {
            format!(
                "seed {} evaluated {new_after_start} new samples",
                r.row.seed
            )
        })?;
        let initial_best = h.samples[..h.iterations[0].invocations]
            .iter()
            .map(|s| s.cost)
            .fold(f64::INFINITY, f64::min);
        ensure(h.best_cost() == initial_best, || {
            format!("seed {} moved off its initial best", r.row.seed)
        })?;
        ensure(h.best.iteration_found == 0, || {
            "best found after iteration 0".to_owned()
        })?;
    }
    within(
        t.elapsed(),
        300.0,
        format!(
            "10 runs stalled after {} iterations each with 0 new samples ({feasible_total} feasible SA samples, all duplicates of the initial ones)",
            runs[0].history.iterations.len() - 1
        ),
    )
}

fn c10_determinism() -> Outcome {
    let t = Instant::now();
    let cfg = ExperimentConfig::default()
        .with_overrides(&[
            "digits=[12, 16]",
            "ranks=[4]",
            "n_runs=4",
            "seed=10",
            "max_samples=40",
            "schedule.n_steps=40",
            "schedule.sweeps_per_step=20",
        ])
        .map_err(|e| e.to_string())?;
    let one = run_experiment_to(&cfg, Some(1), Vec::new()).map_err(|e| e.to_string())?;
    let mut bytes = Vec::new();
    let four = run_experiment_to(&cfg, Some(4), &mut bytes).map_err(|e| e.to_string())?;
    for (a, b) in one.iter().zip(&four) {
        ensure(a.same_outcome(b), || {
            format!("run {} differs between 1 and 4 workers", a.run_id)
        })?;
    }
    let file = ResultsFile::from_reader(&bytes[..]).map_err(|e| e.to_string())?;
    for row in &file.rows {
        for workers in [1, 3] {
            let r = replay(&file, row.run_id, Some(workers)).map_err(|e| e.to_string())?;
            ensure(r.matches(), || {
                format!("run {} does not replay with {workers} workers", row.run_id)
            })?;
        }
    }
    Ok(format!(
        "{} rows identical with 1 and 4 workers and replayed with 1 and 3 workers ({:.1} s)",
        file.rows.len(),
        t.elapsed().as_secs_f64()
    ))
}

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let want = |c: u32| selected.is_empty() || selected.contains(&c);
    let mut failed = 0;
    let mut report = |id: u32, name: &str, t: Instant, outcome: Outcome| {
        let secs = t.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} criterion {id:>2} {name} [{secs:.1} s]: {detail}");
    };

    let simple: [(u32, &str, fn() -> Outcome); 6] = [
        (1, "encoding tables", c1_encoding_tables),
        (2, "FM/QUBO identity", c2_fm_qubo_identity),
        (3, "constraint QUBOs", c3_constraint_correctness),
        (4, "single-flip bound", c4_flip_bound),
        (5, "SA quality", c5_sa_quality),
        (6, "chemistry oracles", c6_chemistry),
    ];
    for (id, name, f) in simple {
        if want(id) {
            let t = Instant::now();
            report(id, name, t, f());
        }
    }
    if want(7) || want(9) {
        let t = Instant::now();
        let (c7, c9) = c7_c9_one_hot();
        if want(7) {
            report(7, "one-hot FMA reaches E2*", t, c7);
        }
        if want(9) {
            report(9, "first-hit invocations", t, c9);
        }
    }
    if want(8) {
        let t = Instant::now();
        report(8, "domain-wall p=1 failure", t, c8_domain_wall_failure());
    }
    if want(10) {
        let t = Instant::now();
        report(10, "replay determinism", t, c10_determinism());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
