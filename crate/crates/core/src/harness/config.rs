//! Experiment configuration: a TOML file describing a grid of cells, each
//! run `n_runs` times with derived seeds.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::anneal::{initial_beta, AnnealSchedule, SaBatchConfig};
use crate::codec::{CodecSpec, Encoding};
use crate::engine::FmaConfig;
use crate::error::{Error, Result};
use crate::fm::TrainConfig;
use crate::h2::EQUILIBRIUM_BOND_LENGTH;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Best-of-`n` energy per bond length.
    EnergyCurve,
    /// Per-run energy errors over a (d, k) grid.
    ErrorDistribution,
    /// Per-run first-hit invocation counts against energy error.
    InvocationScatter,
    /// The same study across search dimensions.
    DimensionCompare,
    /// HF and FCI reference energies only; no optimization.
    FciCurve,
    /// Enumerate the discretized search space.
    ExhaustiveOracle,
}

impl ExperimentKind {
    /// Kinds that run the surrogate loop and write [`super::ResultRow`]s.
    pub fn runs_fma(self) -> bool {
        !matches!(self, Self::FciCurve | Self::ExhaustiveOracle)
    }
}

/// Annealing knobs. `beta_initial = None` derives `1/ΔH_upper` per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleConfig {
    pub beta_initial: Option<f64>,
    pub beta_final: f64,
    pub n_steps: usize,
    pub sweeps_per_step: usize,
    pub n_samples: usize,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self {
            beta_initial: None,
            beta_final: AnnealSchedule::DEFAULT_BETA_FINAL,
            n_steps: AnnealSchedule::DEFAULT_STEPS,
            sweeps_per_step: AnnealSchedule::DEFAULT_SWEEPS,
            n_samples: SaBatchConfig::default().n_samples,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub encoding: Encoding,
    /// Bits per variable, one cell per entry.
    pub digits: Vec<usize>,
    /// FM ranks, one cell per entry.
    pub ranks: Vec<usize>,
    /// Penalty coefficients; ignored (treated as 0) for binary.
    pub penalties: Vec<f64>,
    /// Search dimensions `L`, each one of 2, 6, 16.
    pub dimensions: Vec<usize>,
    /// Bond lengths in Ångström.
    pub bond_lengths: Vec<f64>,
    /// Range offset; `None` centers the range on zero.
    pub n0: Option<i64>,
    pub n_runs: usize,
    /// Runs per cell considered for the `cell_best` flag; `None` means all.
    pub best_of: Option<usize>,
    pub seed: u64,
    pub output: PathBuf,
    pub train: TrainConfig,
    pub schedule: ScheduleConfig,
    pub n_select: usize,
    pub max_iterations: usize,
    pub max_samples: usize,
    pub stall_limit: usize,
    pub warm_start: bool,
    /// A run's first hit is the first invocation whose cost is within this
    /// many hartree of the run's final best.
    pub first_hit_tol: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: ExperimentKind::ErrorDistribution,
            encoding: Encoding::OneHot,
            digits: vec![64],
            ranks: vec![8],
            penalties: vec![1000.0],
            dimensions: vec![2],
            bond_lengths: vec![EQUILIBRIUM_BOND_LENGTH],
            n0: None,
            n_runs: 10,
            best_of: None,
            seed: 0,
            output: PathBuf::from("results.csv"),
            train: TrainConfig::default(),
            schedule: ScheduleConfig::default(),
            n_select: 3,
            max_iterations: 1000,
            max_samples: 1000,
            stall_limit: 6,
            warm_start: false,
            first_hit_tol: 0.0,
        }
    }
}

/// One point of the experiment grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub bond_length: f64,
    pub dimension: usize,
    pub encoding: Encoding,
    pub d: usize,
    pub k: usize,
    pub penalty: f64,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_runs == 0 {
            return Err(Error::config("n_runs must be at least 1"));
        }
        if self.best_of == Some(0) {
            return Err(Error::config("best_of must be at least 1"));
        }
        if self.bond_lengths.is_empty() {
            return Err(Error::config("bond_lengths must not be empty"));
        }
        if let Some(r) = self
            .bond_lengths
            .iter()
            .find(|r| !(**r > 0.0) || !r.is_finite())
        {
            return Err(Error::config(format!("bond length {r} must be positive")));
        }
        if !self.kind.runs_fma() && self.kind != ExperimentKind::ExhaustiveOracle {
            return Ok(());
        }
        for (name, empty) in [
            ("digits", self.digits.is_empty()),
            ("dimensions", self.dimensions.is_empty()),
            (
                "penalties",
                self.penalties.is_empty() && self.encoding != Encoding::Binary,
            ),
            ("ranks", self.ranks.is_empty() && self.kind.runs_fma()),
        ] {
            if empty {
                return Err(Error::config(format!("{name} must not be empty")));
            }
        }
        if let Some(l) = self.dimensions.iter().find(|l| ![2, 6, 16].contains(*l)) {
            return Err(Error::config(format!(
                "search dimension must be 2, 6 or 16, got {l}"
            )));
        }
        if self.kind == ExperimentKind::ExhaustiveOracle && self.dimensions.iter().any(|&l| l != 2)
        {
            return Err(Error::config(
                "exhaustive enumeration is limited to L = 2; use the property tests for larger spaces",
            ));
        }
        if !(self.first_hit_tol >= 0.0) {
            return Err(Error::config("first_hit_tol must be nonnegative"));
        }
        self.train.validate()?;
        for cell in self.cells() {
            if self.kind.runs_fma() {
                self.fma_config(&cell, 0)?;
            } else {
                self.codec(&cell)?;
            }
        }
        Ok(())
    }

    fn penalty_grid(&self) -> Vec<f64> {
        if self.encoding == Encoding::Binary {
            vec![0.0]
        } else {
            self.penalties.clone()
        }
    }

    /// The grid in a fixed order: bond length, dimension, digits, rank,
    /// penalty (last varies fastest).
    pub fn cells(&self) -> Vec<Cell> {
        let ranks = if self.kind.runs_fma() {
            self.ranks.clone()
        } else {
            vec![0]
        };
        let mut out = Vec::new();
        for &bond_length in &self.bond_lengths {
            for &dimension in &self.dimensions {
                for &d in &self.digits {
                    for &k in &ranks {
                        for &penalty in &self.penalty_grid() {
                            out.push(Cell {
                                bond_length,
                                dimension,
                                encoding: self.encoding,
                                d,
                                k,
                                penalty,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn codec(&self, cell: &Cell) -> Result<CodecSpec> {
        let n0 = match cell.encoding {
            Encoding::Binary => 0,
            kind => self
                .n0
                .unwrap_or_else(|| CodecSpec::centered_offset(kind, cell.d)),
        };
        CodecSpec::new(cell.encoding, cell.dimension, cell.d, n0, cell.penalty)
    }

    /// Engine configuration for one run of a cell.
    pub fn fma_config(&self, cell: &Cell, seed: u64) -> Result<FmaConfig> {
        let codec = self.codec(cell)?;
        let s = &self.schedule;
        let beta0 = match s.beta_initial {
            Some(b) => b,
            None => initial_beta(&codec)?,
        };
        let cfg = FmaConfig {
            schedule: AnnealSchedule::new(beta0, s.beta_final, s.n_steps, s.sweeps_per_step)?,
            codec,
            rank: cell.k,
            train: self.train.clone(),
            sa_batch: SaBatchConfig {
                n_samples: s.n_samples,
                rng_seed: 0,
            },
            n_select: self.n_select,
            max_iterations: self.max_iterations,
            max_samples: self.max_samples,
            stall_limit: self.stall_limit,
            rng_seed: seed,
            warm_start: self.warm_start,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Apply `key=value` overrides, where `key` is a dotted path into the
    /// TOML document and `value` is a TOML literal (bare words are taken as
    /// strings).
    pub fn with_overrides<S: AsRef<str>>(&self, overrides: &[S]) -> Result<Self> {
        let mut doc: toml::Table =
            toml::from_str(&self.to_toml_string()?).map_err(|e| Error::config(e.to_string()))?;
        for raw in overrides {
            let raw = raw.as_ref();
            let (key, value) = raw
                .split_once('=')
                .ok_or_else(|| Error::config(format!("override {raw:?} is not key=value")))?;
            set_path(&mut doc, key.trim(), parse_literal(value.trim()))?;
        }
        let text = toml::to_string(&doc).map_err(|e| Error::config(e.to_string()))?;
        Self::from_toml_str(&text)
    }
}

fn parse_literal(s: &str) -> toml::Value {
    let wrapped = format!("v = {s}");
    match toml::from_str::<toml::Table>(&wrapped) {
        Ok(mut t) => t
            .remove("v")
            .unwrap_or_else(|| toml::Value::String(s.to_owned())),
        Err(_) => toml::Value::String(s.to_owned()),
    }
}

fn set_path(doc: &mut toml::Table, key: &str, value: toml::Value) -> Result<()> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts
        .pop()
        .filter(|k| !k.is_empty())
        .ok_or_else(|| Error::config(format!("empty override key {key:?}")))?;
    let mut table = doc;
    for p in parts {
        table = table
            .entry(p)
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| Error::config(format!("{p} in {key:?} is not a table")))?;
    }
    table.insert(last.to_owned(), value);
    Ok(())
}

/// Named presets for the published parameter studies. These are long
/// studies; the CI suite uses much smaller configurations.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let base = ExperimentConfig::default();
    let bond_grid = || {
        let mut g: Vec<f64> = (0..=54).map(|i| (30 + 5 * i) as f64 / 100.0).collect();
        g.push(EQUILIBRIUM_BOND_LENGTH);
        g.sort_by(f64::total_cmp);
        g
    };
    let cfg = match name {
        "energy-curve-one-hot" => ExperimentConfig {
            kind: ExperimentKind::EnergyCurve,
            penalties: vec![1.0, 10.0, 1000.0],
            bond_lengths: bond_grid(),
            ..base
        },
        "energy-curve-domain-wall" => ExperimentConfig {
            kind: ExperimentKind::EnergyCurve,
            encoding: Encoding::DomainWall,
            digits: vec![63],
            penalties: vec![1.0, 10.0, 1000.0],
            bond_lengths: bond_grid(),
            ..base
        },
        "errors-binary" => ExperimentConfig {
            encoding: Encoding::Binary,
            digits: vec![2, 4, 6, 8],
            ranks: vec![1, 2, 8],
            penalties: vec![],
            n_runs: 100,
            ..base
        },
        "errors-one-hot" => ExperimentConfig {
            digits: vec![8, 16, 32, 64],
            ranks: vec![1, 8, 64],
            n_runs: 100,
            ..base
        },
        "errors-domain-wall" => ExperimentConfig {
            encoding: Encoding::DomainWall,
            digits: vec![7, 15, 31, 63],
            ranks: vec![1, 8, 64],
            n_runs: 100,
            ..base
        },
        "invocations-one-hot" => ExperimentConfig {
            kind: ExperimentKind::InvocationScatter,
            ranks: vec![1, 8, 64],
            n_runs: 100,
            ..base
        },
        "dimensions-binary" => ExperimentConfig {
            kind: ExperimentKind::DimensionCompare,
            encoding: Encoding::Binary,
            digits: vec![6],
            ranks: vec![1, 2],
            penalties: vec![],
            dimensions: vec![6],
            n_runs: 50,
            ..base
        },
        "dimensions-one-hot" => ExperimentConfig {
            kind: ExperimentKind::DimensionCompare,
            ranks: vec![1, 8],
            dimensions: vec![6],
            n_runs: 50,
            ..base
        },
        "dimensions-domain-wall" => ExperimentConfig {
            kind: ExperimentKind::DimensionCompare,
            encoding: Encoding::DomainWall,
            digits: vec![63],
            ranks: vec![1, 8],
            dimensions: vec![6],
            n_runs: 50,
            ..base
        },
        "fci-curve" => ExperimentConfig {
            kind: ExperimentKind::FciCurve,
            bond_lengths: bond_grid(),
            ..base
        },
        "oracle" => ExperimentConfig {
            kind: ExperimentKind::ExhaustiveOracle,
            encoding: Encoding::Binary,
            digits: vec![6],
            penalties: vec![],
            ..base
        },
        other => {
            return Err(Error::config(format!(
                "unknown preset {other:?}; available: {}",
                PRESETS.join(", ")
            )))
        }
    };
    cfg.validate()?;
    Ok(cfg)
}

pub const PRESETS: &[&str] = &[
    "energy-curve-one-hot",
    "energy-curve-domain-wall",
    "errors-binary",
    "errors-one-hot",
    "errors-domain-wall",
    "invocations-one-hot",
    "dimensions-binary",
    "dimensions-one-hot",
    "dimensions-domain-wall",
    "fci-curve",
    "oracle",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let cfg = preset("errors-one-hot").unwrap();
        let text = cfg.to_toml_string().unwrap();
        assert_eq!(ExperimentConfig::from_toml_str(&text).unwrap(), cfg);
    }

    #[test]
    fn all_presets_validate() {
        for name in PRESETS {
            preset(name).unwrap();
        }
        assert!(matches!(preset("nope"), Err(Error::Config(_))));
    }

    #[test]
    fn error_distribution_run_counts() {
        assert_eq!(preset("errors-binary").unwrap().n_runs, 100);
        assert_eq!(preset("dimensions-one-hot").unwrap().n_runs, 50);
    }

    #[test]
    fn grid_order_and_size() {
        let cfg = preset("errors-domain-wall").unwrap();
        let cells = cfg.cells();
        assert_eq!(cells.len(), 4 * 3);
        assert_eq!((cells[0].d, cells[0].k), (7, 1));
        assert_eq!((cells[1].d, cells[1].k), (7, 8));
        let bin = preset("errors-binary").unwrap().cells();
        assert!(bin.iter().all(|c| c.penalty == 0.0));
    }

    #[test]
    fn centered_ranges() {
        let cfg = ExperimentConfig::default();
        let codec = cfg.codec(&cfg.cells()[0]).unwrap();
        assert_eq!(codec.range(), (-32, 31));
    }

    #[test]
    fn overrides_apply_and_validate() {
        let cfg = ExperimentConfig::default()
            .with_overrides(&[
                "seed=7",
                "schedule.n_steps = 10",
                "encoding=domain-wall",
                "digits=[63]",
            ])
            .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.schedule.n_steps, 10);
        assert_eq!(cfg.encoding, Encoding::DomainWall);
        assert!(ExperimentConfig::default()
            .with_overrides(&["n_runs=0"])
            .is_err());
        assert!(ExperimentConfig::default()
            .with_overrides(&["bogus=1"])
            .is_err());
        assert!(ExperimentConfig::default()
            .with_overrides(&["seed"])
            .is_err());
    }

    #[test]
    fn rejects_bad_grids() {
        let bad = |f: fn(&mut ExperimentConfig)| {
            let mut c = ExperimentConfig::default();
            f(&mut c);
            matches!(c.validate(), Err(Error::Config(_)))
        };
        assert!(bad(|c| c.bond_lengths.clear()));
        assert!(bad(|c| c.dimensions = vec![3]));
        assert!(bad(|c| c.digits = vec![1]));
        assert!(bad(|c| {
            c.kind = ExperimentKind::ExhaustiveOracle;
            c.dimensions = vec![6];
        }));
    }
}
