//! Numeric spot checks of domination certificates: every certificate the
//! symbolic rules emit must survive evaluation on finite models.

use prodest_core::models::{eval_seminorm, GridFunction, ModelVector, SeqVector};
use prodest_core::seminorm::{dominates_expr, SeminormExpr, WeightMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TRUNCATION: usize = 8;

fn random_seq(rng: &mut ChaCha8Rng) -> ModelVector {
    ModelVector::Seq(SeqVector::new(
        (0..TRUNCATION).map(|_| rng.gen_range(-3.0..3.0)).collect(),
    ))
}

fn expr_pool() -> Vec<SeminormExpr> {
    let w1: WeightMap = [(0u64, 2.0), (3u64, 0.5)].into_iter().collect();
    let w2: WeightMap = [(0u64, 4.0), (3u64, 1.0), (5u64, 1.5)].into_iter().collect();
    vec![
        SeminormExpr::prefix_sup(1),
        SeminormExpr::prefix_sup(2),
        SeminormExpr::prefix_sup(5),
        SeminormExpr::prefix_sup(8),
        SeminormExpr::scale(3.0, SeminormExpr::prefix_sup(2)),
        SeminormExpr::scale(0.25, SeminormExpr::prefix_sup(6)),
        SeminormExpr::MaxOf {
            terms: vec![SeminormExpr::prefix_sup(3), SeminormExpr::scale(2.0, SeminormExpr::prefix_sup(1))],
        },
        SeminormExpr::SumOf {
            terms: vec![(1.0, SeminormExpr::prefix_sup(4)), (0.5, SeminormExpr::prefix_sup(2))],
        },
        SeminormExpr::weighted_sup(w1),
        SeminormExpr::weighted_sup(w2),
    ]
}

#[test]
fn certificates_hold_on_sampled_vectors() {
    let pool = expr_pool();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let samples: Vec<ModelVector> = (0..500).map(|_| random_seq(&mut rng)).collect();

    let mut certified = 0;
    for p in &pool {
        for q in &pool {
            let Some(cert) = dominates_expr(p, q) else { continue };
            certified += 1;
            for x in &samples {
                let lhs = eval_seminorm(p, x).unwrap();
                let rhs = eval_seminorm(q, x).unwrap();
                assert!(
                    lhs <= cert.constant * rhs * (1.0 + 1e-12),
                    "certificate {p} ≤ {}·{q} refuted: {lhs} vs {}",
                    cert.constant,
                    cert.constant * rhs
                );
            }
        }
    }
    assert!(certified > 20, "rule engine certified too little: {certified}");
}

#[test]
fn scaled_prefix_certificate_matches_sampled_ratio() {
    // Oracle for the constant 3: the ratio p(x)/q(x) over random vectors
    // approaches but never exceeds it.
    let p = SeminormExpr::scale(3.0, SeminormExpr::prefix_sup(2));
    let q = SeminormExpr::prefix_sup(5);
    let cert = dominates_expr(&p, &q).unwrap();
    assert_eq!(cert.constant, 3.0);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut best_ratio = 0.0f64;
    for _ in 0..1000 {
        let x = random_seq(&mut rng);
        let lhs = eval_seminorm(&p, &x).unwrap();
        let rhs = eval_seminorm(&q, &x).unwrap();
        assert!(lhs <= cert.constant * rhs * (1.0 + 1e-12));
        if rhs > 0.0 {
            best_ratio = best_ratio.max(lhs / rhs);
        }
    }
    assert!(best_ratio > 2.5, "the constant 3 should be nearly attained, saw {best_ratio}");
}

#[test]
fn refuted_direction_has_separating_vector() {
    // e_3 gives lhs 1, rhs 0, so no constant exists and none is claimed.
    let p = SeminormExpr::prefix_sup(5);
    let q = SeminormExpr::prefix_sup(2);
    assert!(dominates_expr(&p, &q).is_none());
    let e3 = ModelVector::Seq(SeqVector::basis(5, 2));
    assert_eq!(eval_seminorm(&p, &e3).unwrap(), 1.0);
    assert_eq!(eval_seminorm(&q, &e3).unwrap(), 0.0);
}

#[test]
fn blockwise_certificates_hold_on_block_vectors() {
    let block_pool = [
        SeminormExpr::BlockMax {
            terms: vec![SeminormExpr::prefix_sup(2), SeminormExpr::prefix_sup(4)],
        },
        SeminormExpr::BlockMax {
            terms: vec![SeminormExpr::prefix_sup(4), SeminormExpr::prefix_sup(4)],
        },
        SeminormExpr::BlockSum {
            terms: vec![(1.0, SeminormExpr::prefix_sup(2)), (2.0, SeminormExpr::prefix_sup(4))],
        },
        SeminormExpr::BlockSum {
            terms: vec![(0.5, SeminormExpr::prefix_sup(4)), (1.0, SeminormExpr::prefix_sup(4))],
        },
        SeminormExpr::Scale {
            factor: 3.0,
            inner: Box::new(SeminormExpr::BlockMax {
                terms: vec![SeminormExpr::prefix_sup(3), SeminormExpr::prefix_sup(3)],
            }),
        },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let samples: Vec<ModelVector> = (0..300)
        .map(|_| ModelVector::Blocks {
            blocks: vec![
                ModelVector::Seq(SeqVector::new(
                    (0..4).map(|_| rng.gen_range(-3.0..3.0)).collect(),
                )),
                ModelVector::Seq(SeqVector::new(
                    (0..4).map(|_| rng.gen_range(-3.0..3.0)).collect(),
                )),
            ],
        })
        .collect();

    let mut certified = 0;
    for p in &block_pool {
        for q in &block_pool {
            let Some(cert) = dominates_expr(p, q) else { continue };
            certified += 1;
            for x in &samples {
                let lhs = eval_seminorm(p, x).unwrap();
                let rhs = eval_seminorm(q, x).unwrap();
                assert!(
                    lhs <= cert.constant * rhs * (1.0 + 1e-12),
                    "blockwise certificate {p} ≤ {}·{q} refuted",
                    cert.constant
                );
            }
        }
    }
    assert!(certified >= 10, "blockwise rules certified too little: {certified}");
}

mod certificate_soundness {
    use super::*;
    use proptest::prelude::*;

    fn evaluable_expr() -> impl Strategy<Value = SeminormExpr> {
        let leaf = (1u32..=8).prop_map(SeminormExpr::prefix_sup);
        leaf.prop_recursive(3, 24, 3, |inner| {
            prop_oneof![
                (prop::sample::select(vec![0.25f64, 0.5, 1.0, 2.0, 5.0]), inner.clone())
                    .prop_map(|(c, e)| SeminormExpr::scale(c, e)),
                prop::collection::vec(inner.clone(), 1..4)
                    .prop_map(|terms| SeminormExpr::MaxOf { terms }),
                prop::collection::vec(
                    (prop::sample::select(vec![0.5f64, 1.0, 3.0]), inner),
                    1..4
                )
                .prop_map(|terms| SeminormExpr::SumOf { terms }),
            ]
        })
    }

    proptest! {
        // Whatever certificate the rules emit must survive evaluation.
        #[test]
        fn emitted_certificates_are_sound(
            p in evaluable_expr(),
            q in evaluable_expr(),
            seed in 0u64..1000,
        ) {
            if let Some(cert) = dominates_expr(&p, &q) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..50 {
                    let x = random_seq(&mut rng);
                    let lhs = eval_seminorm(&p, &x).unwrap();
                    let rhs = eval_seminorm(&q, &x).unwrap();
                    prop_assert!(
                        lhs <= cert.constant * rhs * (1.0 + 1e-12),
                        "{p} ≤ {}·{q} refuted: {lhs} vs {}",
                        cert.constant,
                        cert.constant * rhs
                    );
                }
            }
        }
    }
}

#[test]
fn ck_norm_certificates_hold_on_grids() {
    use std::f64::consts::PI;
    let pool = [
        SeminormExpr::ck_norm(0),
        SeminormExpr::ck_norm(1),
        SeminormExpr::ck_norm(2),
        SeminormExpr::scale(2.0, SeminormExpr::ck_norm(1)),
    ];
    let grids: Vec<ModelVector> = (1..=6)
        .map(|m| {
            ModelVector::Grid(
                GridFunction::sample_circle(512, |x| {
                    (2.0 * PI * m as f64 * x).sin() + 0.3 * (2.0 * PI * x).cos()
                })
                .unwrap(),
            )
        })
        .collect();
    for p in &pool {
        for q in &pool {
            let Some(cert) = dominates_expr(p, q) else { continue };
            for g in &grids {
                let lhs = eval_seminorm(p, g).unwrap();
                let rhs = eval_seminorm(q, g).unwrap();
                assert!(lhs <= cert.constant * rhs * (1.0 + 1e-12));
            }
        }
    }
}
