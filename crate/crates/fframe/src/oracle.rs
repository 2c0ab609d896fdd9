//! Independent brute-force solver for the infimum norm.
//!
//! The feasible set `{ f : |c_i| <= |g_i(f)| }` is a union of 2^m convex
//! polyhedra, one per sign pattern of the constraints. Each piece is an
//! intersection of half-spaces, and the minimum-norm point of such an
//! intersection is found by Dykstra's alternating projections in the
//! level-s metric. The global value is the minimum over all patterns.
//!
//! This module is the trust anchor for the block-frame closed forms and
//! deliberately shares no code with them.

use crate::frame::GeneralFrameSpec;
use crate::hierarchy::WeightHierarchy;
use crate::linalg::{dot, norm2};
use crate::seq::ScalarSequence;
use crate::theta::{Method, ThetaNormResult};
use crate::{Error, Result};

const MOVE_TOL: f64 = 1e-10;
const RESID_TOL: f64 = 1e-8;
const CYCLE_CAP: usize = 1_000_000;
const STALL_WINDOW: usize = 300;

#[derive(Debug, Clone, PartialEq)]
pub enum PolyhedronSolve {
    Optimal { point: Vec<f64>, value: f64 },
    Infeasible,
}

/// Minimizes `||W f||_2` subject to `A f >= b` with `W` a positive
/// diagonal. Dykstra's projections run in the coordinates `u = W f`,
/// where the problem becomes the projection of the origin onto an
/// intersection of half-spaces. Iteration stops when a full cycle moves
/// the iterate less than 1e-10; if the feasibility residual is then still
/// above 1e-8 (or stalls there), the piece is reported infeasible.
pub fn min_norm_polyhedron(
    a: &[Vec<f64>],
    b: &[f64],
    w: &[f64],
) -> Result<PolyhedronSolve> {
    let n = w.len();
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch("constraint rows vs rhs".into()));
    }
    if w.iter().any(|&x| x.is_nan() || x <= 0.0) {
        return Err(Error::InvalidWeights("W must be positive diagonal".into()));
    }

    // normalized half-spaces in u-space: unit[i] . u >= beta[i]
    let mut unit: Vec<Vec<f64>> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    for (row, &bi) in a.iter().zip(b) {
        if row.len() != n {
            return Err(Error::DimensionMismatch("constraint row length".into()));
        }
        let scaled: Vec<f64> = row.iter().zip(w).map(|(x, wi)| x / wi).collect();
        let rho = norm2(&scaled);
        if rho == 0.0 {
            if bi > 0.0 {
                return Ok(PolyhedronSolve::Infeasible);
            }
            continue;
        }
        unit.push(scaled.iter().map(|x| x / rho).collect());
        beta.push(bi / rho);
    }
    let m = unit.len();
    if m == 0 {
        return Ok(PolyhedronSolve::Optimal { point: vec![0.0; n], value: 0.0 });
    }

    // pairwise screen: opposite directions with a positive gap can never
    // both be satisfied
    for i in 0..m {
        for j in i + 1..m {
            if dot(&unit[i], &unit[j]) <= -1.0 + 1e-12 && beta[i] + beta[j] > 1e-12 {
                return Ok(PolyhedronSolve::Infeasible);
            }
        }
    }

    let mut u = vec![0.0; n];
    let mut corrections = vec![vec![0.0; n]; m];
    let mut resid_history: Vec<f64> = Vec::new();

    for cycle in 0..CYCLE_CAP {
        let prev = u.clone();
        for i in 0..m {
            // Dykstra step: project (u + p_i) onto half-space i
            let mut z = vec![0.0; n];
            for k in 0..n {
                z[k] = u[k] + corrections[i][k];
            }
            let violation = (beta[i] - dot(&unit[i], &z)).max(0.0);
            for k in 0..n {
                u[k] = z[k] + violation * unit[i][k];
                corrections[i][k] = z[k] - u[k];
            }
        }
        let moved = prev
            .iter()
            .zip(&u)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        let resid = (0..m)
            .map(|i| (beta[i] - dot(&unit[i], &u)).max(0.0))
            .fold(0.0f64, f64::max);

        if moved < MOVE_TOL {
            if resid <= RESID_TOL {
                let point: Vec<f64> = u.iter().zip(w).map(|(x, wi)| x / wi).collect();
                return Ok(PolyhedronSolve::Optimal { point, value: norm2(&u) });
            }
            return Ok(PolyhedronSolve::Infeasible);
        }

        resid_history.push(resid);
        if cycle >= STALL_WINDOW {
            let old = resid_history[cycle - STALL_WINDOW];
            if resid > RESID_TOL && old - resid < 1e-14 {
                return Ok(PolyhedronSolve::Infeasible);
            }
        }
    }
    Err(Error::IterationCap)
}

/// Brute-force evaluation of the infimum norm: enumerate sign patterns
/// over the active constraints (those with |c_i| > 0), solve the convex
/// piece for each pattern and take the overall minimum. Ties between
/// patterns resolve to the earliest pattern in enumeration order.
pub fn oracle_theta_norm(
    g: &GeneralFrameSpec,
    c: &ScalarSequence,
    s: usize,
    h: &WeightHierarchy,
) -> Result<ThetaNormResult> {
    let m = g.functional_count();
    let n = g.dim();
    if m > 20 {
        return Err(Error::OracleLimit(format!("m = {m} > 20")));
    }
    if n > 6 {
        return Err(Error::OracleLimit(format!("n = {n} > 6")));
    }
    if c.support_len() > m {
        return Err(Error::DimensionMismatch(format!(
            "sequence support {} exceeds functional count {m}",
            c.support_len()
        )));
    }
    if h.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "hierarchy dim {} vs frame dim {n}",
            h.dim()
        )));
    }
    let w = h.weights_at(s)?.to_vec();

    let active: Vec<usize> = (0..m).filter(|&i| c.get(i) != 0.0).collect();
    if active.is_empty() {
        return Ok(ThetaNormResult {
            value: 0.0,
            witness: vec![0.0; n],
            method: Method::Oracle,
            level: s,
        });
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 0u64..(1u64 << active.len()) {
        let mut rows = Vec::with_capacity(active.len());
        let mut rhs = Vec::with_capacity(active.len());
        for (bit, &i) in active.iter().enumerate() {
            let sign = if mask >> bit & 1 == 1 { -1.0 } else { 1.0 };
            rows.push(g.row(i)?.iter().map(|x| sign * x).collect::<Vec<f64>>());
            rhs.push(c.get(i).abs());
        }
        match min_norm_polyhedron(&rows, &rhs, &w)? {
            PolyhedronSolve::Optimal { point, .. } => {
                // polish: scale up so every constraint holds exactly
                let mut gamma = 1.0f64;
                let mut ok = true;
                for (row, &bi) in rows.iter().zip(&rhs) {
                    let v = dot(row, &point);
                    if v <= 0.0 {
                        ok = false;
                        break;
                    }
                    gamma = gamma.max(bi / v);
                }
                if !ok {
                    continue;
                }
                let point: Vec<f64> = point.iter().map(|x| gamma * x).collect();
                let value = h.level_norm(&point, s)?;
                if best.as_ref().is_none_or(|(bv, _)| value < *bv) {
                    best = Some((value, point));
                }
            }
            PolyhedronSolve::Infeasible => {}
        }
    }

    let (value, witness) = best.ok_or(Error::AllPatternsInfeasible)?;
    // post-check: the witness must genuinely lie in M^c
    let gf: ScalarSequence = {
        let fs: crate::frame::FrameSpec = g.clone().into();
        fs.analysis(&witness)?
    };
    for i in 0..m {
        if c.get(i).abs() > gf.get(i).abs() + 1e-9 * (1.0 + c.get(i).abs()) {
            return Err(Error::Precondition(format!(
                "oracle witness violates constraint {i}"
            )));
        }
    }
    Ok(ThetaNormResult { value, witness, method: Method::Oracle, level: s })
}
