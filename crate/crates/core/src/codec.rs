//! Integer ↔ bit-vector encodings: signed binary, one-hot and domain-wall.
//!
//! Bit vectors are stored lowest index first, `(x_0, …, x_{d-1})`. When
//! rendered as text, binary strings put the sign bit `x_{d-1}` on the left
//! (ordinary positional notation) while one-hot and domain-wall strings put
//! `x_0` on the left:
//!
//! | n  | binary | one-hot | domain-wall |
//! |----|--------|---------|-------------|
//! | -2 | `10`   | `1000`  | `000`       |
//! | -1 | `11`   | `0100`  | `100`       |
//! |  0 | `00`   | `0010`  | `110`       |
//! |  1 | `01`   | `0001`  | `111`       |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::qubo::QuboMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Encoding {
    Binary,
    OneHot,
    DomainWall,
}

impl Encoding {
    pub fn name(self) -> &'static str {
        match self {
            Encoding::Binary => "binary",
            Encoding::OneHot => "one-hot",
            Encoding::DomainWall => "domain-wall",
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "binary" => Ok(Encoding::Binary),
            "one-hot" | "onehot" => Ok(Encoding::OneHot),
            "domain-wall" | "domainwall" => Ok(Encoding::DomainWall),
            other => Err(Error::config(format!("unknown encoding '{other}'"))),
        }
    }
}

/// Largest binary digit count we accept; keeps `2^(d-1)` inside `i64`.
const MAX_BINARY_DIGITS: usize = 62;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodecSpec {
    pub kind: Encoding,
    /// Bits per integer variable.
    pub d: usize,
    /// Range offset; ignored for binary.
    pub n0: i64,
    /// Number of integer variables.
    pub l: usize,
    /// Penalty coefficient on the constraint term; always 0 for binary.
    pub p: f64,
}

impl CodecSpec {
    pub fn new(kind: Encoding, l: usize, d: usize, n0: i64, p: f64) -> Result<Self> {
        if d == 0 || l == 0 {
            return Err(Error::config("codec needs d ≥ 1 and L ≥ 1"));
        }
        if kind == Encoding::Binary && d > MAX_BINARY_DIGITS {
            return Err(Error::config(format!(
                "binary encoding supports at most {MAX_BINARY_DIGITS} digits"
            )));
        }
        if !(p >= 0.0) || !p.is_finite() {
            return Err(Error::config("penalty must be finite and nonnegative"));
        }
        let (n0, p) = match kind {
            Encoding::Binary => (0, 0.0),
            _ => (n0, p),
        };
        Ok(Self { kind, d, n0, l, p })
    }

    pub fn binary(l: usize, d: usize) -> Result<Self> {
        Self::new(Encoding::Binary, l, d, 0, 0.0)
    }

    pub fn one_hot(l: usize, d: usize, n0: i64, p: f64) -> Result<Self> {
        Self::new(Encoding::OneHot, l, d, n0, p)
    }

    pub fn domain_wall(l: usize, d: usize, n0: i64, p: f64) -> Result<Self> {
        Self::new(Encoding::DomainWall, l, d, n0, p)
    }

    /// Offset that centres the representable range on zero, rounding down:
    /// one-hot `d = 64` and domain-wall `d = 63` both give `[-32, 31]`.
    pub fn centered_offset(kind: Encoding, d: usize) -> i64 {
        match kind {
            Encoding::Binary => 0,
            Encoding::OneHot => -((d / 2) as i64),
            Encoding::DomainWall => -(((d + 1) / 2) as i64),
        }
    }

    pub fn total_bits(&self) -> usize {
        self.l * self.d
    }

    /// Inclusive representable range of one variable.
    pub fn range(&self) -> (i64, i64) {
        match self.kind {
            Encoding::Binary => {
                let half = 1i64 << (self.d - 1);
                (-half, half - 1)
            }
            Encoding::OneHot => (self.n0, self.n0 + self.d as i64 - 1),
            Encoding::DomainWall => (self.n0, self.n0 + self.d as i64),
        }
    }

    /// Number of distinct integers one variable can take.
    pub fn cardinality(&self) -> u64 {
        match self.kind {
            Encoding::Binary => 1u64 << self.d,
            Encoding::OneHot => self.d as u64,
            Encoding::DomainWall => self.d as u64 + 1,
        }
    }

    pub fn contains(&self, n: i64) -> bool {
        let (lo, hi) = self.range();
        (lo..=hi).contains(&n)
    }
}

/// A point in the integer search space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntegerPoint(pub Vec<i64>);

impl IntegerPoint {
    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }
}

impl fmt::Display for IntegerPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

pub fn decode_binary(bits: &[u8]) -> Result<i64> {
    let d = bits.len();
    if d == 0 || d > MAX_BINARY_DIGITS {
        return Err(Error::config(format!("unsupported binary width {d}")));
    }
    let mut n = 0i64;
    for (i, &b) in bits[..d - 1].iter().enumerate() {
        n += (b as i64) << i;
    }
    n -= (bits[d - 1] as i64) << (d - 1);
    Ok(n)
}

pub fn decode_onehot(bits: &[u8], n0: i64) -> Result<i64> {
    decode_onehot_var(bits, n0, 0)
}

fn decode_onehot_var(bits: &[u8], n0: i64, variable: usize) -> Result<i64> {
    let mut active = bits.iter().enumerate().filter(|(_, &b)| b != 0);
    match (active.next(), active.next()) {
        (Some((i, _)), None) => Ok(n0 + i as i64),
        _ => Err(Error::Infeasible {
            encoding: Encoding::OneHot.name(),
            variable,
        }),
    }
}

pub fn decode_domainwall(bits: &[u8], n0: i64) -> Result<i64> {
    decode_domainwall_var(bits, n0, 0)
}

fn decode_domainwall_var(bits: &[u8], n0: i64, variable: usize) -> Result<i64> {
    let ones = bits.iter().take_while(|&&b| b != 0).count();
    if bits[ones..].iter().any(|&b| b != 0) {
        return Err(Error::Infeasible {
            encoding: Encoding::DomainWall.name(),
            variable,
        });
    }
    Ok(n0 + ones as i64)
}

/// Encode one integer variable into `d` bits.
pub fn encode(n: i64, spec: &CodecSpec) -> Result<Vec<u8>> {
    let (min, max) = spec.range();
    if n < min || n > max {
        return Err(Error::OutOfRange { value: n, min, max });
    }
    let d = spec.d;
    Ok(match spec.kind {
        Encoding::Binary => {
            let u = n as u64;
            (0..d).map(|i| ((u >> i) & 1) as u8).collect()
        }
        Encoding::OneHot => {
            let mut bits = vec![0; d];
            bits[(n - spec.n0) as usize] = 1;
            bits
        }
        Encoding::DomainWall => {
            let ones = (n - spec.n0) as usize;
            (0..d).map(|i| u8::from(i < ones)).collect()
        }
    })
}

/// Encode all `L` variables, concatenating their slices.
pub fn encode_point(point: &[i64], spec: &CodecSpec) -> Result<Vec<u8>> {
    check_len(spec.l, point.len())?;
    let mut bits = Vec::with_capacity(spec.total_bits());
    for &n in point {
        bits.extend(encode(n, spec)?);
    }
    Ok(bits)
}

fn slice_feasible(kind: Encoding, slice: &[u8]) -> bool {
    match kind {
        Encoding::Binary => true,
        Encoding::OneHot => slice.iter().filter(|&&b| b != 0).count() == 1,
        Encoding::DomainWall => {
            let ones = slice.iter().take_while(|&&b| b != 0).count();
            slice[ones..].iter().all(|&b| b == 0)
        }
    }
}

pub fn is_feasible(bits: &[u8], spec: &CodecSpec) -> Result<bool> {
    check_len(spec.total_bits(), bits.len())?;
    Ok(bits
        .chunks_exact(spec.d)
        .all(|slice| slice_feasible(spec.kind, slice)))
}

pub fn decode_point(bits: &[u8], spec: &CodecSpec) -> Result<IntegerPoint> {
    check_len(spec.total_bits(), bits.len())?;
    bits.chunks_exact(spec.d)
        .enumerate()
        .map(|(l, slice)| match spec.kind {
            Encoding::Binary => decode_binary(slice),
            Encoding::OneHot => decode_onehot_var(slice, spec.n0, l),
            Encoding::DomainWall => decode_domainwall_var(slice, spec.n0, l),
        })
        .collect::<Result<Vec<_>>>()
        .map(IntegerPoint)
}

/// Constraint QUBO summed over all variables, without the penalty factor.
///
/// One-hot: `(Σ_i x_i − 1)²` expands to `−Σ x_i + 2 Σ_{i<j} x_i x_j + 1`.
/// Domain-wall: `2(Σ_{i≥1} x_i − Σ_i x_i x_{i+1})`, which costs 2 per extra
/// wall. Binary yields the zero matrix.
pub fn constraint_qubo(spec: &CodecSpec) -> QuboMatrix {
    let d = spec.d;
    let mut q = QuboMatrix::zeros(spec.total_bits());
    match spec.kind {
        Encoding::Binary => {}
        Encoding::OneHot => {
            for l in 0..spec.l {
                let base = l * d;
                for i in 0..d {
                    q.add(base + i, base + i, -1.0);
                    for j in i + 1..d {
                        q.add(base + i, base + j, 2.0);
                    }
                }
                q.constant += 1.0;
            }
        }
        Encoding::DomainWall => {
            for l in 0..spec.l {
                let base = l * d;
                for i in 1..d {
                    q.add(base + i, base + i, 2.0);
                    q.add(base + i - 1, base + i, -2.0);
                }
            }
        }
    }
    q
}

/// Render one variable's bits in the conventional printed order.
pub fn render_bits(bits: &[u8], kind: Encoding) -> String {
    let ch = |b: &u8| if *b != 0 { '1' } else { '0' };
    match kind {
        Encoding::Binary => bits.iter().rev().map(ch).collect(),
        _ => bits.iter().map(ch).collect(),
    }
}

/// Inverse of [`render_bits`].
pub fn parse_bits(s: &str, kind: Encoding) -> Result<Vec<u8>> {
    let mut bits = s
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Format(format!("invalid bit character '{other}'"))),
        })
        .collect::<Result<Vec<u8>>>()?;
    if kind == Encoding::Binary {
        bits.reverse();
    }
    Ok(bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_rows() {
        assert_eq!(decode_binary(&[0, 1]).unwrap(), -2);
        assert_eq!(decode_binary(&[1, 1]).unwrap(), -1);
        assert_eq!(decode_binary(&[0; 7]).unwrap(), 0);
        let spec = CodecSpec::binary(1, 2).unwrap();
        assert_eq!(encode(-1, &spec).unwrap(), vec![1, 1]);
        assert!(matches!(encode(2, &spec), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn onehot_rows() {
        assert_eq!(decode_onehot(&[1, 0, 0, 0], -2).unwrap(), -2);
        assert_eq!(decode_onehot(&[0, 0, 0, 1], -2).unwrap(), 1);
        assert!(matches!(
            decode_onehot(&[0, 0, 0, 0], -2),
            Err(Error::Infeasible { .. })
        ));
        let spec = CodecSpec::one_hot(1, 4, -2, 1.0).unwrap();
        assert_eq!(encode(0, &spec).unwrap(), vec![0, 0, 1, 0]);
    }

    #[test]
    fn domainwall_rows() {
        assert_eq!(decode_domainwall(&[1, 1, 0], -2).unwrap(), 0);
        assert_eq!(decode_domainwall(&[1, 1, 1], -2).unwrap(), 1);
        assert!(decode_domainwall(&[1, 0, 1], -2).is_err());
        let spec = CodecSpec::domain_wall(1, 3, -2, 1.0).unwrap();
        assert_eq!(encode(-2, &spec).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn constraint_energy_examples() {
        let oh = CodecSpec::one_hot(1, 4, -2, 1.0).unwrap();
        let c = constraint_qubo(&oh);
        assert_eq!(c.energy(&[0, 1, 0, 0]).unwrap() + c.constant, 0.0);
        assert_eq!(c.energy(&[0, 1, 1, 0]).unwrap() + c.constant, 1.0);
        let dw = CodecSpec::domain_wall(1, 3, -2, 1.0).unwrap();
        assert_eq!(constraint_qubo(&dw).energy(&[1, 0, 1]).unwrap(), 2.0);
        let bin = CodecSpec::binary(2, 3).unwrap();
        assert_eq!(constraint_qubo(&bin).max_abs(), 0.0);
    }

    #[test]
    fn feasibility() {
        let bin = CodecSpec::binary(2, 2).unwrap();
        assert!(is_feasible(&[1, 0, 1, 1], &bin).unwrap());
        let oh = CodecSpec::one_hot(2, 4, -2, 1.0).unwrap();
        assert!(!is_feasible(&[1, 0, 0, 0, 0, 0, 0, 0], &oh).unwrap());
        assert!(is_feasible(&[1, 0], &bin).is_err());
        let dw = CodecSpec::domain_wall(2, 3, -2, 1.0).unwrap();
        assert!(is_feasible(&[1, 1, 0, 1, 1, 0], &dw).unwrap());
    }

    #[test]
    fn decode_point_reports_variable() {
        let bin = CodecSpec::binary(2, 2).unwrap();
        assert_eq!(
            decode_point(&[0, 1, 1, 1], &bin).unwrap(),
            IntegerPoint(vec![-2, -1])
        );
        let oh = CodecSpec::one_hot(2, 2, 0, 1.0).unwrap();
        match decode_point(&[1, 0, 1, 1], &oh) {
            Err(Error::Infeasible { variable, .. }) => assert_eq!(variable, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rendering_matches_tables() {
        assert_eq!(render_bits(&[0, 1], Encoding::Binary), "10");
        assert_eq!(render_bits(&[1, 0, 0, 0], Encoding::OneHot), "1000");
        assert_eq!(render_bits(&[1, 0, 0], Encoding::DomainWall), "100");
        assert_eq!(parse_bits("10", Encoding::Binary).unwrap(), vec![0, 1]);
    }

    #[test]
    fn centered_offsets() {
        let oh = CodecSpec::one_hot(2, 64, CodecSpec::centered_offset(Encoding::OneHot, 64), 1.0)
            .unwrap();
        assert_eq!(oh.range(), (-32, 31));
        let dw = CodecSpec::domain_wall(
            2,
            63,
            CodecSpec::centered_offset(Encoding::DomainWall, 63),
            1.0,
        )
        .unwrap();
        assert_eq!(dw.range(), (-32, 31));
        assert_eq!(CodecSpec::binary(2, 6).unwrap().range(), (-32, 31));
    }
}
