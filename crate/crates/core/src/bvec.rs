//! Fixed-width Boolean vectors.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A Boolean vector of fixed dimension, one coordinate per circuit line.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BVec(Vec<bool>);

impl BVec {
    pub fn new(bits: Vec<bool>) -> BVec {
        assert!(!bits.is_empty(), "BVec dimension must be positive");
        BVec(bits)
    }

    /// Parse a {0,1} string, e.g. `"101"`.
    pub fn from_bits(s: &str) -> Result<BVec, String> {
        if s.is_empty() {
            return Err("empty bit string".into());
        }
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(format!("bad bit `{c}` in `{s}`")),
            }
        }
        Ok(BVec(bits))
    }

    pub fn zeros(dim: usize) -> BVec {
        BVec(vec![false; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn complement(&self) -> BVec {
        BVec(self.0.iter().map(|b| !b).collect())
    }

    /// Coordinatewise AND.
    pub fn and(&self, other: &BVec) -> BVec {
        BVec(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    /// Coordinatewise OR.
    pub fn or(&self, other: &BVec) -> BVec {
        BVec(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    /// Coordinatewise order: `self(i) <= other(i)` for every i.
    pub fn leq(&self, other: &BVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a <= *b)
    }

    pub fn concat(&self, other: &BVec) -> BVec {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        BVec(bits)
    }

    /// Restriction to a coordinate range (0-based, half-open).
    pub fn project(&self, range: std::ops::Range<usize>) -> BVec {
        BVec(self.0[range].to_vec())
    }
}

impl fmt::Display for BVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{}", if *b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BVec({})", self)
    }
}

impl FromStr for BVec {
    type Err = String;
    fn from_str(s: &str) -> Result<BVec, String> {
        BVec::from_bits(s)
    }
}

impl Serialize for BVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<BVec, D::Error> {
        let s = String::deserialize(d)?;
        BVec::from_bits(&s).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_ops() {
        let a = BVec::from_bits("10").unwrap();
        let b = BVec::from_bits("01").unwrap();
        assert_eq!(a.and(&b).to_string(), "00");
        assert_eq!(a.or(&b).to_string(), "11");
        assert_eq!(a.complement().to_string(), "01");
        assert!(BVec::from_bits("10x").is_err());
        assert!(BVec::from_bits("").is_err());
    }

    #[test]
    fn leq_is_coordinatewise() {
        let lo = BVec::from_bits("00").unwrap();
        let hi = BVec::from_bits("11").unwrap();
        let mid = BVec::from_bits("10").unwrap();
        assert!(lo.leq(&mid) && mid.leq(&hi) && lo.leq(&hi));
        assert!(!mid.leq(&lo));
        assert!(!BVec::from_bits("01").unwrap().leq(&mid));
    }

    #[test]
    fn concat_project_inverse() {
        let a = BVec::from_bits("10").unwrap();
        let b = BVec::from_bits("011").unwrap();
        let c = a.concat(&b);
        assert_eq!(c.project(0..2), a);
        assert_eq!(c.project(2..5), b);
    }
}
