//! Finitely supported scalar sequences.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A finitely supported real coefficient sequence with an implicit zero
/// tail. Trailing zeros are stripped on construction so that equality is
/// canonical: `(1, 2, 0)` and `(1, 2)` denote the same sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ScalarSequence {
    entries: Vec<f64>,
}

impl ScalarSequence {
    /// Builds a sequence, rejecting NaN/infinite entries.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        for (i, &x) in entries.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFinite(i));
            }
        }
        let mut entries = entries;
        while entries.last() == Some(&0.0) {
            entries.pop();
        }
        Ok(Self { entries })
    }

    pub fn zero() -> Self {
        Self { entries: Vec::new() }
    }

    /// Support length: index of the last nonzero entry, or 0.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Entry at 0-based index `i`; zero beyond the stored support.
    pub fn get(&self, i: usize) -> f64 {
        self.entries.get(i).copied().unwrap_or(0.0)
    }

    /// Entries padded with zeros up to length `m`.
    pub fn padded(&self, m: usize) -> Vec<f64> {
        (0..m.max(self.entries.len())).map(|i| self.get(i)).collect()
    }

    /// lp norm. `p` must be >= 1; `f64::INFINITY` selects the sup norm.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        if p == f64::INFINITY {
            return Ok(self.sup_norm());
        }
        if p == 2.0 {
            return Ok(self.l2_norm());
        }
        let sum: f64 = self.entries.iter().map(|x| x.abs().powf(p)).sum();
        Ok(sum.powf(1.0 / p))
    }

    pub fn l2_norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Tail `c^(n)`: the first `n` entries zeroed, the rest kept.
    pub fn tail(&self, n: usize) -> Self {
        let mut out = self.entries.clone();
        for x in out.iter_mut().take(n) {
            *x = 0.0;
        }
        Self::new(out).expect("entries already finite")
    }

    /// Solidity comparison: true iff `|d_i| <= |c_i|` for all i, where
    /// `self` plays the role of `c`.
    pub fn solid_dominates(&self, d: &Self) -> bool {
        let m = self.entries.len().max(d.entries.len());
        (0..m).all(|i| d.get(i).abs() <= self.get(i).abs())
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.entries.len().max(other.entries.len());
        let sum: Vec<f64> = (0..m).map(|i| self.get(i) + other.get(i)).collect();
        Self::new(sum).expect("finite + finite")
    }

    pub fn scale(&self, lambda: f64) -> Result<Self> {
        Self::new(self.entries.iter().map(|x| lambda * x).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

impl TryFrom<Vec<f64>> for ScalarSequence {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ScalarSequence> for Vec<f64> {
    fn from(s: ScalarSequence) -> Vec<f64> {
        s.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(v: &[f64]) -> ScalarSequence {
        ScalarSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn lp_norm_examples() {
        assert_eq!(seq(&[3.0, 4.0]).lp_norm(2.0).unwrap(), 5.0);
        assert_eq!(seq(&[]).lp_norm(2.0).unwrap(), 0.0);
        assert_eq!(seq(&[1.0, -2.0, 2.0]).lp_norm(f64::INFINITY).unwrap(), 2.0);
        assert!(seq(&[1.0]).lp_norm(0.5).is_err());
        assert!(seq(&[1.0]).lp_norm(f64::NAN).is_err());
    }

    #[test]
    fn norm_zero_iff_zero() {
        assert_eq!(seq(&[0.0, 0.0]).l2_norm(), 0.0);
        assert!(seq(&[0.0, 1e-12]).l2_norm() > 0.0);
    }

    #[test]
    fn tail_examples() {
        assert_eq!(seq(&[1.0, 2.0, 3.0]).tail(1), seq(&[0.0, 2.0, 3.0]));
        assert_eq!(seq(&[1.0, 2.0, 3.0]).tail(0), seq(&[1.0, 2.0, 3.0]));
        assert_eq!(seq(&[1.0, 2.0, 3.0]).tail(5), seq(&[0.0, 0.0, 0.0]));
        assert!(seq(&[1.0, 2.0, 3.0]).tail(5).is_zero());
    }

    #[test]
    fn solid_dominates_examples() {
        assert!(seq(&[2.0, -3.0]).solid_dominates(&seq(&[1.0, 3.0])));
        assert!(!seq(&[1.0, 0.0]).solid_dominates(&seq(&[1.0, 1.0])));
        assert!(seq(&[0.0]).solid_dominates(&seq(&[0.0])));
    }

    #[test]
    fn trailing_zero_equality() {
        assert_eq!(seq(&[1.0, 2.0, 0.0, 0.0]), seq(&[1.0, 2.0]));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(ScalarSequence::new(vec![1.0, f64::NAN]).is_err());
        assert!(ScalarSequence::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = seq(&[1.0, -2.5, 0.0, 3.0]);
        let j = serde_json::to_string(&c).unwrap();
        assert_eq!(j, "[1.0,-2.5,0.0,3.0]");
        let back: ScalarSequence = serde_json::from_str(&j).unwrap();
        assert_eq!(back, c);
    }

    proptest! {
        #[test]
        fn tail_composes(v in proptest::collection::vec(-100.0f64..100.0, 0..12),
                         a in 0usize..14, b in 0usize..14) {
            let c = ScalarSequence::new(v).unwrap();
            prop_assert_eq!(c.tail(a).tail(b), c.tail(a.max(b)));
        }

        #[test]
        fn tail_norm_non_increasing(v in proptest::collection::vec(-100.0f64..100.0, 0..12)) {
            let c = ScalarSequence::new(v).unwrap();
            let m = c.support_len();
            let mut prev = f64::INFINITY;
            for n in 0..=m + 2 {
                let x = c.tail(n).l2_norm();
                prop_assert!(x <= prev + 1e-12);
                prev = x;
            }
            prop_assert_eq!(c.tail(m).l2_norm(), 0.0);
        }

        #[test]
        fn solidity_partial_order(v in proptest::collection::vec(-10.0f64..10.0, 0..8),
                                  w in proptest::collection::vec(-10.0f64..10.0, 0..8)) {
            let c = ScalarSequence::new(v).unwrap();
            let d = ScalarSequence::new(w).unwrap();
            prop_assert!(c.solid_dominates(&c));
            if c.solid_dominates(&d) && d.solid_dominates(&c) {
                let m = c.support_len().max(d.support_len());
                for i in 0..m {
                    prop_assert_eq!(c.get(i).abs(), d.get(i).abs());
                }
            }
        }
    }
}
