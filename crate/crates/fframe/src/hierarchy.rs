//! Weighted Hilbert hierarchy {X_s} given by diagonal weight tables.
//!
//! Level s carries the inner product `<f,h>_s = sum_j a[s][j]^2 f_j h_j`
//! with weights `1 <= a[s][j] <= a[s+1][j]` and `a[0][j] = 1`, so level 0
//! is the plain Euclidean space.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightTable", into = "WeightTable")]
pub struct WeightHierarchy {
    weights: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct WeightTable {
    weights: Vec<Vec<f64>>,
}

impl WeightHierarchy {
    /// Builds a hierarchy from a full table `weights[s][j]`, s = 0..=S.
    pub fn new(weights: Vec<Vec<f64>>) -> Result<Self> {
        if weights.is_empty() || weights[0].is_empty() {
            return Err(Error::InvalidWeights("empty table".into()));
        }
        let dim = weights[0].len();
        for (s, row) in weights.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidWeights(format!(
                    "level {s} has {} weights, expected {dim}",
                    row.len()
                )));
            }
            for (j, &a) in row.iter().enumerate() {
                if !a.is_finite() || a < 1.0 {
                    return Err(Error::InvalidWeights(format!(
                        "a[{s}][{j}] = {a} violates a >= 1"
                    )));
                }
                if s == 0 && a != 1.0 {
                    return Err(Error::InvalidWeights(format!(
                        "a[0][{j}] = {a}, level 0 must be unweighted"
                    )));
                }
                if s > 0 && a < weights[s - 1][j] {
                    return Err(Error::InvalidWeights(format!(
                        "a[{s}][{j}] = {a} < a[{}][{j}] = {}",
                        s - 1,
                        weights[s - 1][j]
                    )));
                }
            }
        }
        Ok(Self { weights })
    }

    /// Unweighted hierarchy: a == 1 at every level.
    pub fn trivial(max_level: usize, dim: usize) -> Self {
        Self { weights: vec![vec![1.0; dim]; max_level + 1] }
    }

    /// Polynomial weights a[s][j] = (1+j)^s (j the 1-based basis index),
    /// the default family used by the examples and the report harness.
    pub fn polynomial(max_level: usize, dim: usize) -> Self {
        let weights = (0..=max_level)
            .map(|s| (1..=dim).map(|j| ((1 + j) as f64).powi(s as i32)).collect())
            .collect();
        Self { weights }
    }

    /// Largest level index S.
    pub fn max_level(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.weights[0].len()
    }

    /// Weight a[s][j] with 0-based basis index `j`.
    pub fn weight(&self, s: usize, j: usize) -> Result<f64> {
        let row = self.weights.get(s).ok_or(Error::LevelOutOfRange(s))?;
        row.get(j).copied().ok_or(Error::IndexOutOfRange(j))
    }

    pub fn weights_at(&self, s: usize) -> Result<&[f64]> {
        self.weights
            .get(s)
            .map(|r| r.as_slice())
            .ok_or(Error::LevelOutOfRange(s))
    }

    /// ||f||_s = sqrt(sum_j a[s][j]^2 f_j^2).
    pub fn level_norm(&self, f: &[f64], s: usize) -> Result<f64> {
        let row = self.weights_at(s)?;
        if f.len() != row.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector has dim {}, hierarchy has dim {}",
                f.len(),
                row.len()
            )));
        }
        Ok(f.iter()
            .zip(row)
            .map(|(x, a)| (a * x) * (a * x))
            .sum::<f64>()
            .sqrt())
    }

    /// <f,h>_s.
    pub fn level_inner(&self, f: &[f64], h: &[f64], s: usize) -> Result<f64> {
        let row = self.weights_at(s)?;
        if f.len() != row.len() || h.len() != row.len() {
            return Err(Error::DimensionMismatch("inner product operands".into()));
        }
        Ok(f.iter().zip(h).zip(row).map(|((x, y), a)| a * a * x * y).sum())
    }

    /// Rescaled basis z_{j,s} = e_j / a[s][j], orthonormal for <.,.>_s.
    pub fn rescaled_basis(&self, s: usize) -> Result<Vec<Vec<f64>>> {
        let row = self.weights_at(s)?;
        let n = row.len();
        Ok((0..n)
            .map(|j| {
                let mut z = vec![0.0; n];
                z[j] = 1.0 / row[j];
                z
            })
            .collect())
    }

    /// Checks the hierarchy axioms at truncation on a sample of vectors.
    /// Norm monotonicity across levels is measured; the inclusion and
    /// density axioms are vacuous on a fixed finite-dimensional space and
    /// are reported as such rather than claimed verified.
    pub fn verify_axioms(&self, sample: &[Vec<f64>]) -> Result<AxiomReport> {
        let mut monotone = true;
        for f in sample {
            let mut prev = self.level_norm(f, 0)?;
            for s in 1..=self.max_level() {
                let cur = self.level_norm(f, s)?;
                if cur < prev - 1e-12 * (1.0 + prev) {
                    monotone = false;
                }
                prev = cur;
            }
        }
        Ok(AxiomReport {
            norm_monotone: monotone,
            inclusion: "trivial at truncation".into(),
            density: "trivial at truncation".into(),
        })
    }
}

impl TryFrom<WeightTable> for WeightHierarchy {
    type Error = Error;
    fn try_from(t: WeightTable) -> Result<Self> {
        Self::new(t.weights)
    }
}

impl From<WeightHierarchy> for WeightTable {
    fn from(h: WeightHierarchy) -> WeightTable {
        WeightTable { weights: h.weights }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxiomReport {
    pub norm_monotone: bool,
    pub inclusion: String,
    pub density: String,
}
