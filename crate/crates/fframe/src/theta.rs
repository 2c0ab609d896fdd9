//! The constructed sequence space: membership in M^c, the infimum norm
//! with its block-frame closed form, canonical-vector norms and tail
//! profiles.
//!
//! For a block frame the infimum
//! `|||c|||_s = inf { ||f||_s : |c_i| <= |g_i(f)| }` is attained at
//! `f* = sum_j c~_j e_j` where `c~_j` is the block maximum of
//! `|c_i| / |t_i|`, giving `|||c|||_s = sqrt(sum_j a[s][j]^2 c~_j^2)`.
//! The closed form is not taken on faith: the brute-force oracle in
//! [`crate::oracle`] validates it wherever it is used.

use serde::{Deserialize, Serialize};

use crate::frame::{BlockFrameSpec, FrameSpec};
use crate::hierarchy::WeightHierarchy;
use crate::oracle;
use crate::seq::ScalarSequence;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "closed-form")]
    ClosedForm,
    #[serde(rename = "oracle")]
    Oracle,
}

/// Value of the infimum norm together with the attaining witness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaNormResult {
    pub value: f64,
    pub witness: Vec<f64>,
    pub method: Method,
    pub level: usize,
}

/// Per-basis-index block maxima c~_j = max_{i in block j} |c_i| / |t_i|.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMaxima {
    values: Vec<f64>,
    /// 0-based functional index of the entry attaining each maximum
    /// (lowest index on ties).
    active: Vec<usize>,
}

impl BlockMaxima {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn active_indices(&self) -> &[usize] {
        &self.active
    }
}

fn check_truncation(m: usize, c: &ScalarSequence) -> Result<()> {
    if c.support_len() > m {
        return Err(Error::DimensionMismatch(format!(
            "sequence support {} exceeds functional count {m}",
            c.support_len()
        )));
    }
    Ok(())
}

/// Membership test for M^c: `|c_i| <= |g_i(f)|` for every i up to the
/// truncation, with an absolute slack `tol` on each coordinate.
pub fn member_mc_tol(
    frame: &FrameSpec,
    c: &ScalarSequence,
    f: &[f64],
    tol: f64,
) -> Result<bool> {
    check_truncation(frame.functional_count(), c)?;
    let gf = frame.analysis(f)?;
    let m = frame.functional_count();
    Ok((0..m).all(|i| c.get(i).abs() <= gf.get(i).abs() + tol))
}

/// Exact membership test for M^c.
pub fn member_mc(frame: &FrameSpec, c: &ScalarSequence, f: &[f64]) -> Result<bool> {
    member_mc_tol(frame, c, f, 0.0)
}

/// Block maxima of |c_i| / |t_i|, the quantities driving every block-frame
/// closed form.
pub fn block_maxima(frame: &BlockFrameSpec, c: &ScalarSequence) -> Result<BlockMaxima> {
    check_truncation(frame.functional_count(), c)?;
    let mut values = Vec::with_capacity(frame.dim());
    let mut active = Vec::with_capacity(frame.dim());
    for j in 0..frame.dim() {
        let mut best = 0.0;
        let mut best_i = frame.block_range(j).start;
        for i in frame.block_range(j) {
            let ratio = c.get(i).abs() / frame.scalar(i)?.abs();
            if ratio > best {
                best = ratio;
                best_i = i;
            }
        }
        values.push(best);
        active.push(best_i);
    }
    Ok(BlockMaxima { values, active })
}

/// The infimum norm `|||c|||_s`. `Method::ClosedForm` requires a block
/// frame; `Method::Oracle` runs the independent brute-force minimizer.
pub fn theta_norm(
    frame: &FrameSpec,
    c: &ScalarSequence,
    s: usize,
    h: &WeightHierarchy,
    method: Method,
) -> Result<ThetaNormResult> {
    match method {
        Method::ClosedForm => {
            let b = frame.as_block().ok_or(Error::ClosedFormRequiresBlock)?;
            closed_form_norm(b, c, s, h)
        }
        Method::Oracle => oracle::oracle_theta_norm(&frame.to_matrix(), c, s, h),
    }
}

pub(crate) fn closed_form_norm(
    frame: &BlockFrameSpec,
    c: &ScalarSequence,
    s: usize,
    h: &WeightHierarchy,
) -> Result<ThetaNormResult> {
    if h.dim() != frame.dim() {
        return Err(Error::DimensionMismatch(format!(
            "hierarchy dim {} vs frame dim {}",
            h.dim(),
            frame.dim()
        )));
    }
    let maxima = block_maxima(frame, c)?;
    let witness = maxima.values().to_vec();
    let value = h.level_norm(&witness, s)?;
    Ok(ThetaNormResult { value, witness, method: Method::ClosedForm, level: s })
}

/// Norm of the i-th canonical sequence vector z_i: the reciprocal of the
/// dual norm of g_i on X_s (for block frames, `a[block(i)][s] / |t_i|`).
pub fn canonical_vector_norm(
    frame: &FrameSpec,
    i: usize,
    s: usize,
    h: &WeightHierarchy,
) -> Result<f64> {
    Ok(1.0 / frame.functional_dual_norm(i, s, h)?)
}

/// Tail-norm profile: `|||c^(k)|||_s` sampled at the block endpoints
/// k_0 = 0, k_1, ..., k_J. Non-increasing with final value 0.
pub fn tail_norm_profile(
    frame: &BlockFrameSpec,
    c: &ScalarSequence,
    s: usize,
    h: &WeightHierarchy,
) -> Result<Vec<(usize, f64)>> {
    check_truncation(frame.functional_count(), c)?;
    frame
        .endpoints()
        .iter()
        .map(|&k| Ok((k, closed_form_norm(frame, &c.tail(k), s, h)?.value)))
        .collect()
}
