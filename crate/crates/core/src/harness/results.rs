//! Results files: a `#`-prefixed JSON header line followed by CSV.
//!
//! ```text
//! # {"format":"fma-results","version":"0.1.0","config":{...}}
//! run_id,seed,bond_length,dimension,encoding,d,k,penalty,iteration,...
//! 0,1234,0.7414,2,one-hot,64,8,1000.0,341,...
//! ```
//!
//! Floats are written in shortest round-trip form, so values read back are
//! bit-identical to the ones written.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{Cell, ExperimentConfig};
use crate::codec::Encoding;
use crate::engine::StopReason;
use crate::error::{Error, Result};

pub const FORMAT_NAME: &str = "fma-results";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Column order of [`ResultRow`] as written.
pub const COLUMNS: &[&str] = &[
    "run_id",
    "seed",
    "bond_length",
    "dimension",
    "encoding",
    "d",
    "k",
    "penalty",
    "iteration",
    "cumulative_invocations",
    "best_energy",
    "energy_error",
    "best_point",
    "first_hit_invocations",
    "stop_reason",
    "cell_best",
    "wall_time",
];

/// Final state of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub run_id: usize,
    pub seed: u64,
    pub bond_length: f64,
    pub dimension: usize,
    pub encoding: Encoding,
    pub d: usize,
    pub k: usize,
    pub penalty: f64,
    /// Index of the last completed iteration.
    pub iteration: usize,
    pub cumulative_invocations: usize,
    /// Hartree.
    pub best_energy: f64,
    /// `best_energy − E_FCI` in hartree.
    pub energy_error: f64,
    /// Integer components separated by `;`.
    pub best_point: String,
    pub first_hit_invocations: usize,
    pub stop_reason: StopReason,
    /// Lowest energy among the first `best_of` runs of its cell.
    pub cell_best: bool,
    /// Seconds; the only column that does not replay.
    pub wall_time: f64,
}

impl ResultRow {
    pub fn cell(&self) -> Cell {
        Cell {
            bond_length: self.bond_length,
            dimension: self.dimension,
            encoding: self.encoding,
            d: self.d,
            k: self.k,
            penalty: self.penalty,
        }
    }

    /// Equality on every column except wall time.
    pub fn same_outcome(&self, other: &Self) -> bool {
        Self {
            wall_time: 0.0,
            ..self.clone()
        } == Self {
            wall_time: 0.0,
            ..other.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub format: String,
    pub version: String,
    pub config: ExperimentConfig,
}

impl Header {
    pub fn new(config: &ExperimentConfig) -> Self {
        Self {
            format: FORMAT_NAME.to_owned(),
            version: VERSION.to_owned(),
            config: config.clone(),
        }
    }
}

/// Writes the header immediately and rows as they arrive, flushing after
/// each batch so an interrupted study keeps its completed cells.
pub struct ResultWriter<W: Write> {
    csv: csv::Writer<W>,
}

impl ResultWriter<BufWriter<File>> {
    pub fn create(path: &Path, config: &ExperimentConfig) -> Result<Self> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        Self::new(BufWriter::new(File::create(path)?), config)
    }
}

impl<W: Write> ResultWriter<W> {
    pub fn new(mut out: W, config: &ExperimentConfig) -> Result<Self> {
        writeln!(out, "# {}", serde_json::to_string(&Header::new(config))?)?;
        Ok(Self {
            csv: csv::Writer::from_writer(out),
        })
    }

    pub fn write_rows<T: Serialize>(&mut self, rows: &[T]) -> Result<()> {
        for r in rows {
            self.csv.serialize(r)?;
        }
        self.csv.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> Result<W> {
        self.csv
            .into_inner()
            .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
    }
}

pub struct ResultsFile {
    pub header: Header,
    pub rows: Vec<ResultRow>,
}

impl ResultsFile {
    pub fn read(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| {
            Error::Io(std::io::Error::new(
                e.kind(),
                format!("{}: {e}", path.display()),
            ))
        })?;
        Self::from_reader(BufReader::new(file))
    }

    pub fn from_reader<R: BufRead>(mut input: R) -> Result<Self> {
        let mut first = String::new();
        input.read_line(&mut first)?;
        let json = first
            .strip_prefix('#')
            .ok_or_else(|| Error::Format("missing '#' header line".into()))?;
        let header: Header = serde_json::from_str(json.trim())?;
        if header.format != FORMAT_NAME {
            return Err(Error::Format(format!("unknown format {:?}", header.format)));
        }
        let mut rdr = csv::Reader::from_reader(input);
        let cols: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
        if cols != COLUMNS {
            return Err(Error::Format(format!("unexpected columns {cols:?}")));
        }
        let rows = rdr.deserialize().collect::<std::result::Result<_, _>>()?;
        Ok(Self { header, rows })
    }

    /// Fails unless the file was written by this version of the crate.
    pub fn check_version(&self) -> Result<()> {
        if self.header.version == VERSION {
            Ok(())
        } else {
            Err(Error::VersionMismatch {
                expected: VERSION.to_owned(),
                found: self.header.version.clone(),
            })
        }
    }

    pub fn row(&self, run_id: usize) -> Result<&ResultRow> {
        self.rows
            .iter()
            .find(|r| r.run_id == run_id)
            .ok_or_else(|| Error::Format(format!("no row with run_id {run_id}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(run_id: usize) -> ResultRow {
        ResultRow {
            run_id,
            seed: 0xdead_beef_0000_0001,
            bond_length: 0.7414,
            dimension: 2,
            encoding: Encoding::OneHot,
            d: 64,
            k: 8,
            penalty: 1000.0,
            iteration: 12,
            cumulative_invocations: 38,
            best_energy: -1.137_264_886_320_063_2,
            energy_error: 0.1 + 0.2,
            best_point: "-26;3".into(),
            first_hit_invocations: 17,
            stop_reason: StopReason::Stalled,
            cell_best: true,
            wall_time: 1.5,
        }
    }

    #[test]
    fn round_trip_is_lossless() {
        let cfg = ExperimentConfig::default();
        let mut w = ResultWriter::new(Vec::new(), &cfg).unwrap();
        w.write_rows(&[row(0), row(1)]).unwrap();
        let bytes = w.into_inner().unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.starts_with("# {\"format\":\"fma-results\""));
        assert_eq!(text.lines().nth(1).unwrap(), COLUMNS.join(","));

        let back = ResultsFile::from_reader(&bytes[..]).unwrap();
        assert_eq!(back.header.config, cfg);
        assert_eq!(back.rows, vec![row(0), row(1)]);
        assert_eq!(
            back.rows[0].energy_error.to_bits(),
            (0.1f64 + 0.2).to_bits()
        );
        back.check_version().unwrap();
    }

    #[test]
    fn version_mismatch_is_explicit() {
        let mut f = ResultsFile {
            header: Header::new(&ExperimentConfig::default()),
            rows: vec![],
        };
        f.header.version = "0.0.0-other".into();
        assert!(matches!(
            f.check_version(),
            Err(Error::VersionMismatch { .. })
        ));
    }

    #[test]
    fn rejects_headerless_input() {
        assert!(matches!(
            ResultsFile::from_reader(&b"run_id,seed\n"[..]),
            Err(Error::Format(_))
        ));
    }
}
