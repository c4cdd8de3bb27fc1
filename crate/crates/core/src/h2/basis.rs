//! Contracted s-type Gaussian basis data.
//!
//! The on-disk format is whitespace-separated `element exponent coefficient`
//! rows; `#` starts a comment. Rows for the same element form one contracted
//! s function, in file order.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// STO-3G hydrogen data shipped with the crate.
pub const STO3G_DATA: &str = include_str!("../../data/sto-3g.basis");

#[derive(Debug, Clone, PartialEq)]
pub struct Primitive {
    pub exponent: f64,
    /// Contraction coefficient times the primitive's normalization constant.
    pub weight: f64,
}

/// A normalized contracted s-type Gaussian.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractedS {
    pub primitives: Vec<Primitive>,
}

impl ContractedS {
    /// Build from `(exponent, coefficient)` pairs whose coefficients refer to
    /// normalized primitives, then rescale so the contraction has unit norm.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::config(
                "contracted function needs at least one primitive",
            ));
        }
        if pairs.iter().any(|&(a, c)| !(a > 0.0) || !c.is_finite()) {
            return Err(Error::config(
                "basis exponents must be positive and coefficients finite",
            ));
        }
        let mut primitives: Vec<Primitive> = pairs
            .iter()
            .map(|&(a, c)| Primitive {
                exponent: a,
                weight: c * primitive_norm(a),
            })
            .collect();
        let norm = self_overlap(&primitives).sqrt();
        for p in &mut primitives {
            p.weight /= norm;
        }
        Ok(Self { primitives })
    }
}

/// Normalization of `exp(−α r²)`: `(2α/π)^{3/4}`.
pub fn primitive_norm(alpha: f64) -> f64 {
    (2.0 * alpha / std::f64::consts::PI).powf(0.75)
}

fn self_overlap(prims: &[Primitive]) -> f64 {
    let mut s = 0.0;
    for a in prims {
        for b in prims {
            let p = a.exponent + b.exponent;
            s += a.weight * b.weight * (std::f64::consts::PI / p).powf(1.5);
        }
    }
    s
}

/// Parse basis data into one contracted s function per element.
pub fn parse_basis(text: &str) -> Result<BTreeMap<String, ContractedS>> {
    let mut raw: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || {
            Error::Format(format!(
                "basis line {}: expected 'element exponent coefficient'",
                lineno + 1
            ))
        };
        if fields.len() != 3 {
            return Err(bad());
        }
        let exponent: f64 = fields[1].parse().map_err(|_| bad())?;
        let coefficient: f64 = fields[2].parse().map_err(|_| bad())?;
        raw.entry(fields[0].to_string())
            .or_default()
            .push((exponent, coefficient));
    }
    raw.into_iter()
        .map(|(el, pairs)| Ok((el, ContractedS::from_pairs(&pairs)?)))
        .collect()
}

/// The shipped STO-3G hydrogen 1s function.
pub fn sto3g_hydrogen() -> ContractedS {
    parse_basis(STO3G_DATA)
        .expect("shipped basis data parses")
        .remove("H")
        .expect("shipped basis data has hydrogen")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_data_is_normalized() {
        let h = sto3g_hydrogen();
        assert_eq!(h.primitives.len(), 3);
        assert!((self_overlap(&h.primitives) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_malformed_rows() {
        assert!(parse_basis("H 1.0").is_err());
        assert!(parse_basis("H one 0.5").is_err());
        assert!(parse_basis("H -1.0 0.5").is_err());
        let parsed = parse_basis("# comment\nHe 2.0 1.0 # trailing\n").unwrap();
        assert!(parsed.contains_key("He"));
    }
}
