//! Frame specifications and the analysis-side geometry.
//!
//! Two representations are supported: block-repetition frames over an
//! orthonormal basis (`g_i = t_i <., e_j>` for i inside block j), which
//! admit closed forms everywhere, and general dense matrix frames where
//! row i is the Riesz representer of `g_i`.

use serde::{Deserialize, Serialize};

use crate::hierarchy::WeightHierarchy;
use crate::linalg::{jacobi_eigenvalues, norm2};
use crate::seq::ScalarSequence;
use crate::{Error, Result};

/// Block-repetition frame: basis vector `e_j` repeated `n_j` times with
/// scalars `t_i`, so functional i in block j acts as `f -> t_i * f_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockFrameSpec {
    mults: Vec<usize>,
    t: Vec<f64>,
    // cumulative endpoints k_0 = 0, k_1, ..., k_J = m
    endpoints: Vec<usize>,
}

impl BlockFrameSpec {
    /// Builds a frame from `(n_j, t-values)` blocks. Every block must be
    /// nonempty with exactly `n_j` scalars, all nonzero.
    pub fn new(blocks: Vec<(usize, Vec<f64>)>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::EmptyBlock(0));
        }
        let mut mults = Vec::with_capacity(blocks.len());
        let mut t = Vec::new();
        let mut endpoints = vec![0usize];
        for (j, (n, tv)) in blocks.into_iter().enumerate() {
            if n == 0 || tv.is_empty() {
                return Err(Error::EmptyBlock(j));
            }
            if tv.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "block {j}: multiplicity {n} but {} scalars",
                    tv.len()
                )));
            }
            for &x in &tv {
                if !x.is_finite() {
                    return Err(Error::NonFinite(t.len()));
                }
                if x == 0.0 {
                    return Err(Error::ZeroScalar(t.len()));
                }
                t.push(x);
            }
            mults.push(n);
            endpoints.push(t.len());
        }
        Ok(Self { mults, t, endpoints })
    }

    /// Basis dimension J.
    pub fn dim(&self) -> usize {
        self.mults.len()
    }

    /// Functional count m = k_J.
    pub fn functional_count(&self) -> usize {
        self.t.len()
    }

    /// Cumulative block endpoints k_0 = 0, ..., k_J = m.
    pub fn endpoints(&self) -> &[usize] {
        &self.endpoints
    }

    /// 0-based block index of 0-based functional index `i`.
    pub fn block_of(&self, i: usize) -> Result<usize> {
        if i >= self.t.len() {
            return Err(Error::IndexOutOfRange(i));
        }
        Ok(self.endpoints.partition_point(|&k| k <= i) - 1)
    }

    /// 0-based functional index range of block `j`.
    pub fn block_range(&self, j: usize) -> std::ops::Range<usize> {
        self.endpoints[j]..self.endpoints[j + 1]
    }

    pub fn scalar(&self, i: usize) -> Result<f64> {
        self.t.get(i).copied().ok_or(Error::IndexOutOfRange(i))
    }

    pub fn scalars(&self) -> &[f64] {
        &self.t
    }

    /// Dense matrix view: row i = t_i * e_{block_of(i)}.
    pub fn as_matrix(&self) -> GeneralFrameSpec {
        let n = self.dim();
        let rows = (0..self.t.len())
            .map(|i| {
                let mut row = vec![0.0; n];
                row[self.block_of(i).unwrap()] = self.t[i];
                row
            })
            .collect();
        GeneralFrameSpec::new(rows).expect("block rows are nonzero")
    }
}

/// General frame given by a dense m x n matrix of Riesz representers.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralFrameSpec {
    rows: Vec<Vec<f64>>,
}

impl GeneralFrameSpec {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        let n = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite(i));
            }
            if row.iter().all(|&x| x == 0.0) {
                return Err(Error::ZeroRow(i));
            }
        }
        Ok(Self { rows })
    }

    pub fn dim(&self) -> usize {
        self.rows[0].len()
    }

    pub fn functional_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> Result<&[f64]> {
        self.rows
            .get(i)
            .map(|r| r.as_slice())
            .ok_or(Error::IndexOutOfRange(i))
    }
}

/// A frame in either representation. Block frames keep their structure so
/// that the closed forms stay available; `as_matrix` bridges to the dense
/// form whenever the generic path is needed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FrameJson", into = "FrameJson")]
pub enum FrameSpec {
    Block(BlockFrameSpec),
    General(GeneralFrameSpec),
}

impl FrameSpec {
    pub fn dim(&self) -> usize {
        match self {
            FrameSpec::Block(b) => b.dim(),
            FrameSpec::General(g) => g.dim(),
        }
    }

    pub fn functional_count(&self) -> usize {
        match self {
            FrameSpec::Block(b) => b.functional_count(),
            FrameSpec::General(g) => g.functional_count(),
        }
    }

    pub fn as_block(&self) -> Option<&BlockFrameSpec> {
        match self {
            FrameSpec::Block(b) => Some(b),
            FrameSpec::General(_) => None,
        }
    }

    pub fn to_matrix(&self) -> GeneralFrameSpec {
        match self {
            FrameSpec::Block(b) => b.as_matrix(),
            FrameSpec::General(g) => g.clone(),
        }
    }

    /// Analysis map f -> {g_i(f)}. The coefficient sequence does not
    /// depend on the level: g_i always acts through the level-0 pairing.
    pub fn analysis(&self, f: &[f64]) -> Result<ScalarSequence> {
        if f.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector has dim {}, frame expects {}",
                f.len(),
                self.dim()
            )));
        }
        let coeffs = match self {
            FrameSpec::Block(b) => (0..b.functional_count())
                .map(|i| b.t[i] * f[b.block_of(i).unwrap()])
                .collect(),
            FrameSpec::General(g) => g
                .rows
                .iter()
                .map(|row| row.iter().zip(f).map(|(a, x)| a * x).sum())
                .collect(),
        };
        ScalarSequence::new(coeffs)
    }

    /// Dual norm of `g_i` restricted to X_s: the operator norm of
    /// `f -> g_i(f)` over the `||.||_s` unit ball. For block frames this
    /// is `|t_i| / a[block(i)][s]`; in general it is the Euclidean norm of
    /// the weight-rescaled row.
    pub fn functional_dual_norm(
        &self,
        i: usize,
        s: usize,
        h: &WeightHierarchy,
    ) -> Result<f64> {
        self.check_hierarchy(h)?;
        match self {
            FrameSpec::Block(b) => {
                let j = b.block_of(i)?;
                Ok(b.t[i].abs() / h.weight(s, j)?)
            }
            FrameSpec::General(g) => {
                let row = g.row(i)?;
                let w = h.weights_at(s)?;
                Ok(norm2(
                    &row.iter().zip(w).map(|(x, a)| x / a).collect::<Vec<_>>(),
                ))
            }
        }
    }

    /// Optimal constants (A, B) in `A ||f||_s^2 <= sum |g_i(f)|^2 <= B ||f||_s^2`,
    /// i.e. the extreme eigenvalues of the Gram matrix of the analysis map
    /// viewed from the X_s unit ball into l^2.
    pub fn l2_frame_bounds(&self, s: usize, h: &WeightHierarchy) -> Result<(f64, f64)> {
        self.check_hierarchy(h)?;
        let g = self.to_matrix();
        let w = h.weights_at(s)?;
        let n = g.dim();
        let mut gram = vec![vec![0.0; n]; n];
        for row in g.rows() {
            for p in 0..n {
                for q in 0..n {
                    gram[p][q] += (row[p] / w[p]) * (row[q] / w[q]);
                }
            }
        }
        let eig = jacobi_eigenvalues(gram);
        let a = eig.first().copied().unwrap_or(0.0).max(0.0);
        let b = eig.last().copied().unwrap_or(0.0).max(0.0);
        Ok((a, b))
    }

    fn check_hierarchy(&self, h: &WeightHierarchy) -> Result<()> {
        if h.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "hierarchy dim {} vs frame dim {}",
                h.dim(),
                self.dim()
            )));
        }
        Ok(())
    }
}

impl From<BlockFrameSpec> for FrameSpec {
    fn from(b: BlockFrameSpec) -> Self {
        FrameSpec::Block(b)
    }
}

impl From<GeneralFrameSpec> for FrameSpec {
    fn from(g: GeneralFrameSpec) -> Self {
        FrameSpec::General(g)
    }
}

/// The sequence g^1 = {e_1, e_1, 2 e_2, 3 e_3, ...} truncated to basis
/// dimension J (so m = J + 1 functionals).
pub fn example_g1(dim: usize) -> Result<BlockFrameSpec> {
    if dim < 2 {
        return Err(Error::DimensionMismatch(format!("example g1 needs J >= 2, got {dim}")));
    }
    let mut blocks = vec![(2, vec![1.0, 1.0])];
    for j in 2..=dim {
        blocks.push((1, vec![j as f64]));
    }
    BlockFrameSpec::new(blocks)
}

/// The sequence g^2 = {e_1, e_2, e_1, e_3, e_1, e_4, ...}: e_1 at odd
/// positions interleaved with each later basis vector once, truncated to
/// 2(J-1) rows. The repetitions of e_1 are not block-contiguous, so this
/// frame only exists in matrix form.
pub fn example_g2(dim: usize) -> Result<GeneralFrameSpec> {
    if dim < 2 {
        return Err(Error::DimensionMismatch(format!("example g2 needs J >= 2, got {dim}")));
    }
    let mut rows = Vec::with_capacity(2 * (dim - 1));
    for k in 1..dim {
        let mut e1 = vec![0.0; dim];
        e1[0] = 1.0;
        rows.push(e1);
        let mut ek = vec![0.0; dim];
        ek[k] = 1.0;
        rows.push(ek);
    }
    GeneralFrameSpec::new(rows)
}

/// Identity (Parseval) frame on R^n.
pub fn identity_frame(dim: usize) -> Result<GeneralFrameSpec> {
    let rows = (0..dim)
        .map(|i| {
            let mut r = vec![0.0; dim];
            r[i] = 1.0;
            r
        })
        .collect();
    GeneralFrameSpec::new(rows)
}

#[derive(Serialize, Deserialize)]
struct BlockEntry {
    mult: usize,
    t: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FrameJson {
    Block { blocks: Vec<BlockEntry> },
    Matrix { matrix: Vec<Vec<f64>> },
}

impl TryFrom<FrameJson> for FrameSpec {
    type Error = Error;
    fn try_from(j: FrameJson) -> Result<Self> {
        match j {
            FrameJson::Block { blocks } => Ok(FrameSpec::Block(BlockFrameSpec::new(
                blocks.into_iter().map(|b| (b.mult, b.t)).collect(),
            )?)),
            FrameJson::Matrix { matrix } => {
                Ok(FrameSpec::General(GeneralFrameSpec::new(matrix)?))
            }
        }
    }
}

impl From<FrameSpec> for FrameJson {
    fn from(f: FrameSpec) -> FrameJson {
        match f {
            FrameSpec::Block(b) => FrameJson::Block {
                blocks: (0..b.dim())
                    .map(|j| BlockEntry {
                        mult: b.mults[j],
                        t: b.scalars()[b.block_range(j)].to_vec(),
                    })
                    .collect(),
            },
            FrameSpec::General(g) => FrameJson::Matrix { matrix: g.rows },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[f64]) -> ScalarSequence {
        ScalarSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn build_block_frame_examples() {
        let f = BlockFrameSpec::new(vec![
            (2, vec![1.0, 1.0]),
            (1, vec![2.0]),
            (1, vec![3.0]),
        ])
        .unwrap();
        assert_eq!(f.dim(), 3);
        assert_eq!(f.functional_count(), 4);
        assert_eq!(f.as_matrix().rows()[2], vec![0.0, 2.0, 0.0]);

        let single = BlockFrameSpec::new(vec![(1, vec![1.0])]).unwrap();
        assert_eq!(single.functional_count(), 1);
        assert_eq!(single.dim(), 1);

        // negative scalar is fine
        assert!(BlockFrameSpec::new(vec![(1, vec![-2.0])]).is_ok());
        // zero scalar and empty block rejected
        assert!(BlockFrameSpec::new(vec![(1, vec![0.0])]).is_err());
        assert!(BlockFrameSpec::new(vec![(0, vec![])]).is_err());
    }

    #[test]
    fn block_of_walks_endpoints() {
        let f = example_g1(4).unwrap();
        assert_eq!(f.endpoints(), &[0, 2, 3, 4, 5]);
        assert_eq!(f.block_of(0).unwrap(), 0);
        assert_eq!(f.block_of(1).unwrap(), 0);
        assert_eq!(f.block_of(2).unwrap(), 1);
        assert_eq!(f.block_of(4).unwrap(), 3);
        assert!(f.block_of(5).is_err());
    }

    #[test]
    fn example_frames() {
        let g1 = example_g1(3).unwrap();
        assert_eq!(
            g1.as_matrix().rows(),
            &[
                vec![1.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 2.0, 0.0],
                vec![0.0, 0.0, 3.0]
            ]
        );
        let g1 = example_g1(2).unwrap();
        assert_eq!(g1.functional_count(), 3);

        let g2 = example_g2(3).unwrap();
        assert_eq!(
            g2.rows(),
            &[
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 0.0, 1.0]
            ]
        );
        assert!(example_g1(1).is_err());
        assert!(example_g2(1).is_err());
    }

    #[test]
    fn analysis_examples() {
        let g1: FrameSpec = example_g1(3).unwrap().into();
        assert_eq!(g1.analysis(&[1.0, 0.0, 0.0]).unwrap(), seq(&[1.0, 1.0, 0.0, 0.0]));
        assert_eq!(g1.analysis(&[1.0, 1.0, 1.0]).unwrap(), seq(&[1.0, 1.0, 2.0, 3.0]));
        assert!(g1.analysis(&[0.0, 0.0, 0.0]).unwrap().is_zero());
        assert!(g1.analysis(&[1.0]).is_err());
    }

    #[test]
    fn analysis_matches_matrix_product() {
        let b = example_g1(4).unwrap();
        let fb: FrameSpec = b.clone().into();
        let fg: FrameSpec = b.as_matrix().into();
        let f = [0.3, -1.2, 2.5, 0.7];
        assert_eq!(fb.analysis(&f).unwrap(), fg.analysis(&f).unwrap());
    }

    #[test]
    fn dual_norm_examples() {
        let g1: FrameSpec = example_g1(3).unwrap().into();
        let h0 = WeightHierarchy::trivial(0, 3);
        assert_eq!(g1.functional_dual_norm(2, 0, &h0).unwrap(), 2.0);

        let h = WeightHierarchy::new(vec![vec![1.0; 3], vec![1.0, 4.0, 1.0]]).unwrap();
        assert_eq!(g1.functional_dual_norm(2, 1, &h).unwrap(), 0.5);

        let id: FrameSpec = identity_frame(3).unwrap().into();
        assert_eq!(id.functional_dual_norm(0, 0, &h0).unwrap(), 1.0);
    }

    #[test]
    fn dual_norm_non_increasing_in_level() {
        let g1: FrameSpec = example_g1(4).unwrap().into();
        let h = WeightHierarchy::polynomial(3, 4);
        for i in 0..g1.functional_count() {
            let mut prev = g1.functional_dual_norm(i, 0, &h).unwrap();
            for s in 1..=3 {
                let cur = g1.functional_dual_norm(i, s, &h).unwrap();
                assert!(cur <= prev + 1e-15);
                prev = cur;
            }
        }
    }

    #[test]
    fn frame_bounds_examples() {
        let h0 = WeightHierarchy::trivial(0, 3);
        let g1: FrameSpec = example_g1(3).unwrap().into();
        let (a, b) = g1.l2_frame_bounds(0, &h0).unwrap();
        assert!((a - 2.0).abs() < 1e-10 && (b - 9.0).abs() < 1e-10);

        let g2: FrameSpec = example_g2(3).unwrap().into();
        let (a, b) = g2.l2_frame_bounds(0, &h0).unwrap();
        assert!((a - 1.0).abs() < 1e-10 && (b - 2.0).abs() < 1e-10);

        let id: FrameSpec = identity_frame(3).unwrap().into();
        let (a, b) = id.l2_frame_bounds(0, &h0).unwrap();
        assert!((a - 1.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let g1: FrameSpec = example_g1(3).unwrap().into();
        let j = serde_json::to_string(&g1).unwrap();
        assert!(j.contains("blocks"));
        let back: FrameSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(back, g1);

        let g2: FrameSpec = example_g2(3).unwrap().into();
        let j = serde_json::to_string(&g2).unwrap();
        assert!(j.contains("matrix"));
        let back: FrameSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(back, g2);

        assert!(serde_json::from_str::<FrameSpec>(r#"{"matrix":[[0.0]]}"#).is_err());
    }
}
