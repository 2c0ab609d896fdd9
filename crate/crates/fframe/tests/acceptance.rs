//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `cargo test --test acceptance -- --nocapture`).

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use fframe::conditions::{self, VerdictConfig};
use fframe::frame::{example_g1, example_g2, BlockFrameSpec, FrameSpec};
use fframe::reconstruct::{self, DualFamily};
use fframe::seq::ScalarSequence;
use fframe::theta::{self, Method};
use fframe::WeightHierarchy;

fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

fn gaussian_seq(rng: &mut ChaCha8Rng, m: usize) -> ScalarSequence {
    ScalarSequence::new(gaussian_vec(rng, m)).unwrap()
}

fn random_block_frame(rng: &mut ChaCha8Rng, max_dim: usize, max_m: usize) -> BlockFrameSpec {
    loop {
        let dim = rng.gen_range(2..=max_dim);
        let mut blocks = Vec::with_capacity(dim);
        let mut total = 0usize;
        for j in 0..dim {
            let remaining_blocks = dim - j - 1;
            let cap = max_m - total - remaining_blocks;
            let mult = rng.gen_range(1..=cap.min(3));
            total += mult;
            let t: Vec<f64> = (0..mult)
                .map(|_| {
                    let mag = rng.gen_range(0.5..3.0);
                    if rng.gen_bool(0.5) {
                        mag
                    } else {
                        -mag
                    }
                })
                .collect();
            blocks.push((mult, t));
        }
        if total <= max_m {
            return BlockFrameSpec::new(blocks).unwrap();
        }
    }
}

fn verdict(name: &str, pass: bool) {
    println!("ACCEPTANCE {name}: {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion failed: {name}");
}

/// Criterion 1: tightness of the block-frame norm, |||{g_i(f)}|||_s
/// equals ||f||_s on g1 with polynomial weights, 500 random f per level.
#[test]
fn criterion_1_tightness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut pass = true;
    for dim in 2..=6usize {
        let fs: FrameSpec = example_g1(dim).unwrap().into();
        let h = WeightHierarchy::polynomial(3, dim);
        for s in 0..=3 {
            for _ in 0..500 {
                let f = gaussian_vec(&mut rng, dim);
                let c = fs.analysis(&f).unwrap();
                let value = theta::theta_norm(&fs, &c, s, &h, Method::ClosedForm)
                    .unwrap()
                    .value;
                let fnorm = h.level_norm(&f, s).unwrap();
                if (value - fnorm).abs() > 1e-9 * (1.0 + fnorm) {
                    pass = false;
                }
            }
        }
    }
    let within_budget = start.elapsed().as_secs_f64() < 5.0;
    verdict("1 tightness", pass && within_budget);
}

/// Criterion 2: closed form vs brute-force oracle on 100 random
/// coefficient sequences over random block frames (m <= 10, J <= 4),
/// levels s <= 2, relative deviation <= 1e-6, under 60 s.
#[test]
fn criterion_2_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut pass = true;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let b = random_block_frame(&mut rng, 4, 10);
        let fs: FrameSpec = b.clone().into();
        let h = WeightHierarchy::polynomial(2, b.dim());
        let c = gaussian_seq(&mut rng, b.functional_count());
        for s in 0..=2 {
            let cf = theta::theta_norm(&fs, &c, s, &h, Method::ClosedForm).unwrap();
            let or = theta::theta_norm(&fs, &c, s, &h, Method::Oracle).unwrap();
            let dev = (cf.value - or.value).abs() / (1.0 + cf.value);
            worst = worst.max(dev);
            if dev > 1e-6 {
                pass = false;
            }
        }
    }
    let within_budget = start.elapsed().as_secs_f64() < 60.0;
    println!("  criterion 2 worst relative deviation: {worst:.3e}");
    verdict("2 oracle-equivalence", pass && within_budget);
}

/// Criterion 3: canonical-vector norm identity |||z_i|||_s =
/// a[block(i)][s] / |t_i| on g1 and three random block frames, checked
/// against the oracle.
#[test]
fn criterion_3_canonical_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut frames: Vec<BlockFrameSpec> = vec![example_g1(3).unwrap()];
    for _ in 0..3 {
        frames.push(random_block_frame(&mut rng, 4, 8));
    }
    let mut pass = true;
    for b in &frames {
        let fs: FrameSpec = b.clone().into();
        let h = WeightHierarchy::polynomial(2, b.dim());
        for i in 0..b.functional_count() {
            let mut z = vec![0.0; b.functional_count()];
            z[i] = 1.0;
            let zi = ScalarSequence::new(z).unwrap();
            let j = b.block_of(i).unwrap();
            for s in 0..=2 {
                let expect = h.weight(s, j).unwrap() / b.scalar(i).unwrap().abs();
                let closed = theta::canonical_vector_norm(&fs, i, s, &h).unwrap();
                let oracle = theta::theta_norm(&fs, &zi, s, &h, Method::Oracle)
                    .unwrap()
                    .value;
                if (closed - expect).abs() > 1e-9 * (1.0 + expect)
                    || (oracle - expect).abs() > 1e-6 * (1.0 + expect)
                {
                    pass = false;
                }
            }
        }
    }
    verdict("3 canonical-vector-identity", pass);
}

/// Criterion 4: series-expansion residual is zero (within 1e-12) for 500
/// random vectors on g1 and g2 with their hand-constructed duals, at
/// every level.
#[test]
fn criterion_4_reconstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let dim = 4;
    let h = WeightHierarchy::polynomial(3, dim);

    let b = example_g1(dim).unwrap();
    let g1: FrameSpec = b.clone().into();
    let dual1 = DualFamily::build_dual(&b);

    let g2: FrameSpec = example_g2(dim).unwrap().into();
    let dual2 =
        DualFamily::from_vectors(&g2, reconstruct::example_g2_dual(dim).unwrap()).unwrap();

    let mut pass = true;
    for (frame, dual) in [(&g1, &dual1), (&g2, &dual2)] {
        for _ in 0..500 {
            let f = gaussian_vec(&mut rng, dim);
            for s in 0..=3 {
                let r = reconstruct::expansion_residual(frame, dual, &f, s, &h).unwrap();
                if r > 1e-12 {
                    pass = false;
                }
            }
        }
    }
    verdict("4 reconstruction", pass);
}

/// Criterion 5: F-boundedness certificate of the synthesis operator:
/// ||f_i||_s <= |||z_i|||_s with equality at block-opening indices, and
/// empirical K_s <= 1 + 1e-9 over 200 random coefficient sequences.
#[test]
fn criterion_5_f_boundedness() {
    let b = example_g1(4).unwrap();
    let dual = DualFamily::build_dual(&b);
    let h = WeightHierarchy::polynomial(3, 4);
    let cert = reconstruct::v_norm_certificate(&b, &dual, &h, 200, 505).unwrap();
    let pass = cert.pass
        && cert
            .levels
            .iter()
            .all(|l| l.dual_bounds_hold && l.opening_equality && l.k_bound <= 1.0 + 1e-9);
    verdict("5 f-boundedness", pass);
}

/// Criterion 6: full condition suite on g1 with polynomial weights:
/// (A1) over 200 random pairs per level with the constructive r
/// certificate, (A2) reaching tail norms below 1e-6, (A3) equal to 1
/// within 1e-9, and the assembled pre-F-frame / F-frame verdicts true.
#[test]
fn criterion_6_condition_suite() {
    let fs: FrameSpec = example_g1(4).unwrap().into();
    let h = WeightHierarchy::polynomial(2, 4);
    let cfg = VerdictConfig {
        samples: 200,
        pairs: 200,
        eps_grid: (0..=6).map(|k| 10f64.powi(-k)).collect(),
        seed: 606,
    };
    let rep = conditions::assemble_verdicts(&fs, &h, None, &cfg).unwrap();
    let mut pass = rep.pre_f_frame && rep.f_frame;
    for l in &rep.levels {
        pass &= l.a1.holds && l.a1.r_certified && l.a1.pairs_checked == 200;
        pass &= l.a2.holds && l.a2.evidence.iter().any(|p| p.eps <= 1e-6);
        pass &= l.a3.holds && (l.a3.lower_bound - 1.0).abs() <= 1e-9;
    }
    verdict("6 condition-suite", pass);
}

/// Criterion 7: no uniform l2 upper frame bound. For g1 the upper bound
/// at truncation J is J^2; for g2 the multiplicity of e_1 makes it J - 1.
/// Both grow without bound in J.
#[test]
fn criterion_7_non_frame_witness() {
    let mut pass = true;
    let mut prev_b1 = 0.0;
    let mut prev_b2 = 0.0;
    for dim in 3..=8usize {
        let h0 = WeightHierarchy::trivial(0, dim);
        let g1: FrameSpec = example_g1(dim).unwrap().into();
        let (_, b1) = g1.l2_frame_bounds(0, &h0).unwrap();
        let expect1 = (dim * dim) as f64;
        if (b1 - expect1).abs() > 1e-9 * expect1 || b1 <= prev_b1 {
            pass = false;
        }
        prev_b1 = b1;

        let g2: FrameSpec = example_g2(dim).unwrap().into();
        let (_, b2) = g2.l2_frame_bounds(0, &h0).unwrap();
        let expect2 = (dim - 1) as f64;
        if (b2 - expect2).abs() > 1e-9 * expect2 || b2 <= prev_b2 {
            pass = false;
        }
        prev_b2 = b2;
    }
    verdict("7 non-frame-witness", pass);
}

/// Criterion 8: solidity and the coordinate bound, both methods, over
/// 500 random (c, coordinate-wise shrunk d) pairs, zero violations.
#[test]
fn criterion_8_solidity_and_coordinate_bound() {
    let b = example_g1(3).unwrap();
    let fs: FrameSpec = b.clone().into();
    let h = WeightHierarchy::polynomial(1, 3);
    let m = b.functional_count();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut pass = true;
    for _ in 0..500 {
        let c = gaussian_seq(&mut rng, m);
        let d = ScalarSequence::new(
            c.padded(m)
                .iter()
                .map(|x| x * rng.gen_range(0.0..1.0))
                .collect(),
        )
        .unwrap();
        assert!(c.solid_dominates(&d));
        for s in 0..=1 {
            for method in [Method::ClosedForm, Method::Oracle] {
                let nc = theta::theta_norm(&fs, &c, s, &h, method).unwrap().value;
                let nd = theta::theta_norm(&fs, &d, s, &h, method).unwrap().value;
                if nd > nc + 1e-7 * (1.0 + nc) {
                    pass = false;
                }
                for i in 0..m {
                    let dual = fs.functional_dual_norm(i, s, &h).unwrap();
                    if c.get(i).abs() > dual * nc + 1e-7 * (1.0 + nc) {
                        pass = false;
                    }
                }
            }
        }
    }
    verdict("8 solidity-and-coordinate-bound", pass);
}
