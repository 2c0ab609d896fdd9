//! Dual families, the synthesis operator V and its boundedness
//! certificates.
//!
//! For a block frame the dual vectors are sparse: the index opening block
//! j carries `e_j / t_i` and every other index in the block carries 0.
//! The witness vectors `h_i = e_{block(i)} / t_i` attain the
//! canonical-vector infimum. General frames take an explicitly supplied
//! dual family (the expansions of interest are hand-constructed).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::frame::{BlockFrameSpec, FrameSpec};
use crate::hierarchy::WeightHierarchy;
use crate::seq::ScalarSequence;
use crate::theta;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DualFamily {
    vectors: Vec<Vec<f64>>,
    // h_i witnesses, available for block-frame constructions only
    witnesses: Option<Vec<Vec<f64>>>,
    dim: usize,
}

impl DualFamily {
    /// Builds the canonical dual of a block frame and verifies the exact
    /// reconstruction identity on the basis.
    pub fn build_dual(frame: &BlockFrameSpec) -> Self {
        let n = frame.dim();
        let m = frame.functional_count();
        let mut vectors = vec![vec![0.0; n]; m];
        let mut witnesses = vec![vec![0.0; n]; m];
        for j in 0..n {
            let range = frame.block_range(j);
            let opening = range.start;
            vectors[opening][j] = 1.0 / frame.scalar(opening).unwrap();
            for i in range {
                witnesses[i][j] = 1.0 / frame.scalar(i).unwrap();
            }
        }
        let fam = Self { vectors, witnesses: Some(witnesses), dim: n };
        debug_assert!(fam
            .verify_reconstruction(&frame.clone().into())
            .unwrap_or(false));
        fam
    }

    /// Wraps an explicitly supplied dual family for a general frame after
    /// checking the reconstruction identity `sum_i g_i(f) f_i = f` on the
    /// basis vectors.
    pub fn from_vectors(frame: &FrameSpec, vectors: Vec<Vec<f64>>) -> Result<Self> {
        let n = frame.dim();
        if vectors.len() != frame.functional_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} dual vectors for {} functionals",
                vectors.len(),
                frame.functional_count()
            )));
        }
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch("dual vector dimension".into()));
        }
        let fam = Self { vectors, witnesses: None, dim: n };
        if !fam.verify_reconstruction(frame)? {
            return Err(Error::Precondition(
                "supplied dual family does not reconstruct the identity".into(),
            ));
        }
        Ok(fam)
    }

    fn verify_reconstruction(&self, frame: &FrameSpec) -> Result<bool> {
        let n = self.dim;
        for l in 0..n {
            let mut e = vec![0.0; n];
            e[l] = 1.0;
            let coeffs = frame.analysis(&e)?;
            let (out, _) = self.apply_v_partials(&coeffs.padded(self.vectors.len()));
            for (k, &x) in out.iter().enumerate() {
                let expect = if k == l { 1.0 } else { 0.0 };
                if (x - expect).abs() > 1e-12 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn witnesses(&self) -> Option<&[Vec<f64>]> {
        self.witnesses.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    fn apply_v_partials(&self, coeffs: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let mut acc = vec![0.0; self.dim];
        let mut partials = Vec::with_capacity(coeffs.len());
        for (ci, fi) in coeffs.iter().zip(&self.vectors) {
            for k in 0..self.dim {
                acc[k] += ci * fi[k];
            }
            partials.push(acc.clone());
        }
        (acc, partials)
    }

    /// Synthesis `V c = sum_i c_i f_i` together with the trajectory of
    /// partial-sum norms `||sum_{i<=n} c_i f_i||_s`, n = 1..m.
    pub fn apply_v(
        &self,
        c: &ScalarSequence,
        s: usize,
        h: &WeightHierarchy,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        if c.support_len() > self.vectors.len() {
            return Err(Error::DimensionMismatch(format!(
                "sequence support {} exceeds dual family size {}",
                c.support_len(),
                self.vectors.len()
            )));
        }
        let (out, partials) = self.apply_v_partials(&c.padded(self.vectors.len()));
        let norms = partials
            .iter()
            .map(|p| h.level_norm(p, s))
            .collect::<Result<Vec<f64>>>()?;
        Ok((out, norms))
    }

    /// `||c||_{Theta_f} = sup_n || sum_{i<=n} c_i f_i ||_s`, the comparison
    /// norm induced directly by the dual family.
    pub fn theta_f_norm(&self, c: &ScalarSequence, s: usize, h: &WeightHierarchy) -> Result<f64> {
        let (_, norms) = self.apply_v(c, s, h)?;
        Ok(norms.iter().fold(0.0f64, |m, &x| m.max(x)))
    }
}

/// The hand-constructed dual of `example_g2`: e_1 paired with the first
/// row, each later basis vector with its own row, zeros elsewhere.
pub fn example_g2_dual(dim: usize) -> Result<Vec<Vec<f64>>> {
    if dim < 2 {
        return Err(Error::DimensionMismatch(format!("g2 dual needs J >= 2, got {dim}")));
    }
    let mut vectors = Vec::with_capacity(2 * (dim - 1));
    for k in 1..dim {
        let mut odd = vec![0.0; dim];
        if k == 1 {
            odd[0] = 1.0; // only the first e_1 row carries weight
        }
        vectors.push(odd);
        let mut even = vec![0.0; dim];
        even[k] = 1.0;
        vectors.push(even);
    }
    Ok(vectors)
}

/// `|| V({g_i(f)}) - f ||_s`: the series-expansion residual, identically
/// zero at truncation for a valid dual family.
pub fn expansion_residual(
    frame: &FrameSpec,
    dual: &DualFamily,
    f: &[f64],
    s: usize,
    h: &WeightHierarchy,
) -> Result<f64> {
    let coeffs = frame.analysis(f)?;
    let (out, _) = dual.apply_v(&coeffs, s, h)?;
    let diff: Vec<f64> = out.iter().zip(f).map(|(x, y)| x - y).collect();
    h.level_norm(&diff, s)
}

/// Per-level certificate of s-boundedness of V.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelCertificate {
    pub level: usize,
    /// empirical max of ||Vc||_s / |||c|||_s over random c
    pub k_bound: f64,
    /// ||f_i||_s <= |||z_i|||_s for every i
    pub dual_bounds_hold: bool,
    /// equality at block-opening indices, zero elsewhere
    pub opening_equality: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VNormCertificate {
    pub levels: Vec<LevelCertificate>,
    pub seed: u64,
    pub pass: bool,
}

/// Certifies F-boundedness of the block-frame synthesis operator:
/// `||f_i||_s <= |||z_i|||_s` exactly per index, plus an empirical bound
/// `K_s <= 1` measured on `samples` random coefficient sequences.
pub fn v_norm_certificate(
    frame: &BlockFrameSpec,
    dual: &DualFamily,
    h: &WeightHierarchy,
    samples: usize,
    seed: u64,
) -> Result<VNormCertificate> {
    let fs: FrameSpec = frame.clone().into();
    let m = frame.functional_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_cs: Vec<ScalarSequence> = (0..samples)
        .map(|_| {
            ScalarSequence::new((0..m).map(|_| rng.gen_range(-2.0..2.0)).collect())
        })
        .collect::<Result<_>>()?;

    let mut levels = Vec::new();
    let mut pass = true;
    for s in 0..=h.max_level() {
        let mut dual_bounds_hold = true;
        let mut opening_equality = true;
        for i in 0..m {
            let fi_norm = h.level_norm(&dual.vectors()[i], s)?;
            let zi_norm = theta::canonical_vector_norm(&fs, i, s, h)?;
            if fi_norm > zi_norm + 1e-12 * (1.0 + zi_norm) {
                dual_bounds_hold = false;
            }
            let j = frame.block_of(i)?;
            let opens = frame.block_range(j).start == i;
            if opens {
                if (fi_norm - zi_norm).abs() > 1e-12 * (1.0 + zi_norm) {
                    opening_equality = false;
                }
            } else if fi_norm != 0.0 {
                opening_equality = false;
            }
        }

        let mut k_bound: f64 = 0.0;
        for c in &random_cs {
            let denom =
                theta::theta_norm(&fs, c, s, h, theta::Method::ClosedForm)?.value;
            if denom == 0.0 {
                continue;
            }
            let (out, _) = dual.apply_v(c, s, h)?;
            k_bound = k_bound.max(h.level_norm(&out, s)? / denom);
        }

        pass &= dual_bounds_hold && opening_equality && k_bound <= 1.0 + 1e-9;
        levels.push(LevelCertificate { level: s, k_bound, dual_bounds_hold, opening_equality });
    }
    Ok(VNormCertificate { levels, seed, pass })
}
