#![allow(clippy::needless_range_loop)]

//! Acceptance suite: one test per criterion, each asserting the pinned
//! tolerances and time budget and printing a pass line.
//!
//! Run with `cargo test -p prodest-cli --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use prodest_core::cardinal::Cardinal;
use prodest_core::covering::{BaseSpaceDesc, BaseSpaceKind};
use prodest_core::falsify::{bump_blowup, check, Outcome, SampleConfig};
use prodest_core::models::{
    convolve, rl_norm, support_mass, BilinearModel, GridFunction, GroupFunction, GroupModel,
};
use prodest_core::np::{
    classify_convolution, derive, psi_continuity, replay::replay, Degree, GroupClass,
    NpError, PropertyQuery, Status,
};
use prodest_core::seminorm::{dominates_expr, SeminormExpr, SpacePresentation, WeightMap};
use prodest_core::witness::{
    bisgaard_split, cnp_product_estimates, direct_sum_combine, exponent_schedule,
    schedule_constants, target_cnp_product_estimates, weighted_sup_witness, DominationTable,
    FourIndex, Mat,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

fn pass(criterion: u32, description: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its {budget:?} budget: {elapsed:?}"
    );
    println!("ACCEPTANCE PASS: criterion {criterion} — {description} ({elapsed:.2?})");
}

/// Criterion 1: exact sequence-product violation through the CLI, n ≤ 8.
#[test]
fn criterion_1_sequence_product_reproduction() {
    let started = Instant::now();
    let bin = env!("CARGO_BIN_EXE_prodest");
    for n in 1..=8u32 {
        let out = std::process::Command::new(bin)
            .args(["repro", "examp3", "--n", &n.to_string(), "--json"])
            .output()
            .expect("run prodest");
        assert_eq!(out.status.code(), Some(1), "n={n}");
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(doc["violation"]["lhs"], 1.0, "n={n}: lhs must be exactly 1");
        assert_eq!(doc["violation"]["rhs"], 0.0, "n={n}: rhs must be exactly 0");
    }
    pass(1, "repro examp3 exact lhs=1, rhs=0 for n=1..8", started, Duration::from_secs(1));
}

/// Criterion 2: bump blow-up ratios double under halving, C^k norms stay
/// below the base-bump constant, grid self-check passes.
#[test]
fn criterion_2_bump_blowup() {
    let started = Instant::now();
    let grid: Vec<f64> = (3..=7).map(|m| 2f64.powi(-m)).collect();
    for k in 0..=2u32 {
        let report = bump_blowup(k, &grid).unwrap_or_else(|e| panic!("k={k}: {e}"));
        assert_eq!(report.quotients.len(), 4, "k={k}");
        for q in &report.quotients {
            assert!((1.8..=2.2).contains(q), "k={k}: quotient {q} outside [1.8, 2.2]");
        }
        assert!(report.certified, "k={k}");
        assert!(
            report.sup_ck <= report.s_bound * 1.01,
            "k={k}: sup ‖g_t‖_C^k = {} exceeds S = {}",
            report.sup_ck,
            report.s_bound
        );
    }
    pass(
        2,
        "bump blow-up certified for k=0,1,2 with bounded C^k norms",
        started,
        Duration::from_secs(30),
    );
}

fn log_uniform(rng: &mut ChaCha8Rng) -> f64 {
    10f64.powf(rng.gen_range(-3.0..3.0))
}

fn random_mat(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Mat {
    Mat::from_rows((0..rows).map(|_| (0..cols).map(|_| log_uniform(rng)).collect()).collect())
        .unwrap()
}

/// Criterion 3: exhaustive scheduling invariants on 1000 random instances
/// with sizes up to 200×200 and log-uniform entries.
#[test]
fn criterion_3_scheduling_invariants() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        // a_i·b_j ≥ r_{i,j}·s_{i,j}
        let (n, m) = (rng.gen_range(1..=200), rng.gen_range(1..=200));
        let r = random_mat(n, m, &mut rng);
        let s = random_mat(n, m, &mut rng);
        let sched = schedule_constants(&r, &s).unwrap();
        for i in 0..n {
            for j in 0..m {
                assert!(sched.a[i] * sched.b[j] >= r.get(i, j) * s.get(i, j));
            }
        }

        // d_i·d_j ≥ C_{i,j}
        let k = rng.gen_range(1..=200);
        let c = random_mat(k, k, &mut rng);
        let split = bisgaard_split(&c).unwrap();
        for i in 0..k {
            for j in 0..k {
                assert!(split.d[i] * split.d[j] >= c.get(i, j));
            }
        }

        // r_α + s_β ≥ t_{α,β}
        let (n, m) = (rng.gen_range(1..=200), rng.gen_range(1..=200));
        let t: Vec<Vec<u32>> =
            (0..n).map(|_| (0..m).map(|_| rng.gen_range(0..=50)).collect()).collect();
        let exp = exponent_schedule(&t).unwrap();
        for i in 0..n {
            for j in 0..m {
                assert!(exp.r[i] + exp.s[j] >= t[i][j]);
            }
        }

        // u[i][σ]·v[j][τ] ≥ C[i][j][σ][τ]
        let blocks = rng.gen_range(1..=12);
        let (sigma, tau) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let c4: FourIndex = (0..blocks)
            .map(|_| {
                (0..blocks)
                    .map(|_| {
                        (0..sigma)
                            .map(|_| (0..tau).map(|_| log_uniform(&mut rng)).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let base = SeminormExpr::base("p");
        let p_blocks = vec![vec![base.clone(); sigma]; blocks];
        let q_blocks = vec![vec![base; tau]; blocks];
        let combined = direct_sum_combine(&c4, &p_blocks, &q_blocks).unwrap();
        for i in 0..blocks {
            for j in 0..blocks {
                for s in 0..sigma {
                    for t in 0..tau {
                        assert!(combined.u[i][s] * combined.v[j][t] >= c4[i][j][s][t]);
                    }
                }
            }
        }
    }
    pass(
        3,
        "1000 random instances, all four scheduling invariants exhaustively verified",
        started,
        Duration::from_secs(60),
    );
}

fn prefix_targets(rows: usize, cols: usize) -> Vec<Vec<SeminormExpr>> {
    (1..=rows)
        .map(|i| (1..=cols).map(|j| SeminormExpr::prefix_sup((i + j) as u32)).collect())
        .collect()
}

fn expect_pass(out: Outcome, context: &str) {
    if let Outcome::Violation { violation, .. } = out {
        panic!("{context}: violation {violation:?}");
    }
}

/// Criterion 4: witnesses from all three constructors survive 10^5-sample
/// checks on truncated pointwise sequence multiplication.
#[test]
fn criterion_4_witness_soundness() {
    let started = Instant::now();
    let samples = 100_000usize;
    let table = 3usize;

    for truncation in [8usize, 16, 32, 64] {
        let model = BilinearModel::pointwise_seq(truncation);
        let full = SeminormExpr::prefix_sup(truncation as u32);
        let targets = prefix_targets(table, table);

        // Both-sides constructor, constants from the domination engine.
        let constants = |exprs: &[Vec<SeminormExpr>]| {
            Mat::from_rows(
                exprs
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|e| dominates_expr(e, &full).unwrap().constant)
                            .collect()
                    })
                    .collect(),
            )
            .unwrap()
        };
        let p_exprs: Vec<Vec<SeminormExpr>> = (1..=table)
            .map(|i| {
                (1..=table)
                    .map(|j| {
                        SeminormExpr::scale(
                            2f64.powi(i as i32),
                            SeminormExpr::prefix_sup((i + j) as u32),
                        )
                    })
                    .collect()
            })
            .collect();
        let p_bound = DominationTable { target: full.clone(), constants: constants(&p_exprs) };
        let q_bound =
            DominationTable { target: full.clone(), constants: constants(&targets) };
        let witness = cnp_product_estimates(&p_bound, &q_bound).unwrap();
        let out = check(&model, &targets, &witness, &SampleConfig::new(404, samples)).unwrap();
        expect_pass(out, &format!("cnp constructor at truncation {truncation}"));

        // Codomain-side constructor with scaled targets.
        let scaled_targets: Vec<Vec<SeminormExpr>> = (1..=table)
            .map(|i| {
                (1..=table)
                    .map(|j| {
                        SeminormExpr::scale(
                            (i * j) as f64,
                            SeminormExpr::prefix_sup((i + j) as u32),
                        )
                    })
                    .collect()
            })
            .collect();
        let c = Mat::from_rows(
            (1..=table).map(|i| (1..=table).map(|j| (i * j) as f64).collect()).collect(),
        )
        .unwrap();
        let witness = target_cnp_product_estimates(
            &DominationTable { target: full.clone(), constants: c },
            &full,
            &full,
        )
        .unwrap();
        let out =
            check(&model, &scaled_targets, &witness, &SampleConfig::new(405, samples)).unwrap();
        expect_pass(out, &format!("target constructor at truncation {truncation}"));

        // Weighted-sup constructor on random sparse weights.
        let mut rng = ChaCha8Rng::seed_from_u64(truncation as u64);
        let weights: Vec<Vec<WeightMap>> = (0..2)
            .map(|_| {
                (0..2)
                    .map(|_| {
                        (0..truncation / 2)
                            .map(|_| {
                                (
                                    rng.gen_range(0..truncation as u64),
                                    10f64.powf(rng.gen_range(-1.0..1.0)),
                                )
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let (witness, _) = weighted_sup_witness(&weights).unwrap();
        let wtargets: Vec<Vec<SeminormExpr>> = weights
            .iter()
            .map(|row| row.iter().map(|v| SeminormExpr::weighted_sup(v.clone())).collect())
            .collect();
        let out = check(&model, &wtargets, &witness, &SampleConfig::new(406, samples)).unwrap();
        expect_pass(out, &format!("weighted-sup constructor at truncation {truncation}"));
    }
    pass(
        4,
        "all constructed witnesses pass 10^5-sample checks, truncations up to 64",
        started,
        Duration::from_secs(60),
    );
}

/// Criterion 5: convolution norm bounds — exact on cyclic groups, within
/// 1e-6 relative on the circle with trig polynomials.
#[test]
fn criterion_5_young_bounds() {
    let started = Instant::now();

    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for _ in 0..1000 {
        let m = rng.gen_range(1..=64);
        let model = GroupModel::CyclicZ { order: m };
        let draw = |rng: &mut ChaCha8Rng| {
            let v: Vec<f64> = (0..m)
                .map(|_| if rng.gen_bool(0.7) { rng.gen_range(-2.0..2.0) } else { 0.0 })
                .collect();
            GroupFunction::Discrete(v)
        };
        let gamma = draw(&mut rng);
        let eta = draw(&mut rng);
        let conv = convolve(&model, &gamma, &eta).unwrap();
        let rhs = gamma.sup_norm() * eta.sup_norm() * support_mass(&model, &gamma).unwrap();
        assert!(conv.sup_norm() <= rhs, "cyclic bound violated exactly");
    }

    let n = 1024;
    let model = GroupModel::CircleGrid { points: n };
    let mut rng = ChaCha8Rng::seed_from_u64(506);
    for _ in 0..25 {
        let trig = |rng: &mut ChaCha8Rng| {
            let coeffs: Vec<(f64, f64)> = (0..=8)
                .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            GroupFunction::Grid(
                GridFunction::sample_circle(n, |x| {
                    coeffs
                        .iter()
                        .enumerate()
                        .map(|(d, (a, b))| {
                            let arg = 2.0 * std::f64::consts::PI * d as f64 * x;
                            a * arg.cos() + b * arg.sin()
                        })
                        .sum()
                })
                .unwrap(),
            )
        };
        let gamma = trig(&mut rng);
        let eta = trig(&mut rng);
        let conv = convolve(&model, &gamma, &eta).unwrap();
        for k in 0..=2u32 {
            for l in 0..=2u32 {
                let lhs = rl_norm(&model, &conv, k, l).unwrap();
                let rhs = rl_norm(&model, &gamma, k, 0).unwrap()
                    * rl_norm(&model, &eta, 0, l).unwrap(); // λ(G) = 1
                assert!(lhs <= rhs * (1.0 + 1e-6), "k={k}, l={l}: {lhs} > {rhs}");
            }
        }
    }
    pass(
        5,
        "Young-type bounds: exact on ℤ/m (1000 pairs), 1e-6 relative on the circle",
        started,
        Duration::from_secs(30),
    );
}

/// Criterion 6: conformance corpus with sound derivation replay.
#[test]
fn criterion_6_np_conformance() {
    use SpacePresentation as SP;
    let started = Instant::now();
    let cnp = PropertyQuery::Cnp;
    let np1 = PropertyQuery::ThetaNp { theta: Cardinal::Aleph(1) };
    let np2 = PropertyQuery::ThetaNp { theta: Cardinal::Aleph(2) };

    let corpus: Vec<(SP, PropertyQuery, Status)> = vec![
        (SP::Normed, cnp, Status::Holds),
        (SP::Normed, np2, Status::Holds),
        (SP::FrechetSeq { normable: false }, cnp, Status::Fails),
        (SP::FrechetSeq { normable: false }, np1, Status::Fails),
        (SP::FrechetSeq { normable: true }, cnp, Status::Holds),
        (SP::FinSupp, cnp, Status::Holds),
        (SP::direct_sum_uniform(Cardinal::ALEPH_0, SP::Normed), cnp, Status::Holds),
        (
            SP::direct_sum_of(vec![SP::Normed, SP::FinSupp, SP::KOmega]),
            cnp,
            Status::Holds,
        ),
        (
            SP::direct_sum_uniform(Cardinal::ALEPH_0, SP::FrechetSeq { normable: false }),
            cnp,
            Status::Fails,
        ),
        (
            SP::subspace(SP::EllInftyTheta { theta: Cardinal::Aleph(1) }),
            np1,
            Status::Holds,
        ),
        (SP::quotient(SP::Normed), np1, Status::Holds),
        (
            SP::Product { blocks: vec![SP::Normed, SP::FrechetSeq { normable: false }] },
            cnp,
            Status::Fails,
        ),
        (
            SP::Product { blocks: vec![SP::Normed, SP::Normed, SP::Normed] },
            np2,
            Status::Holds,
        ),
        (SP::EllInftyTheta { theta: Cardinal::Aleph(0) }, np1, Status::Fails),
        (SP::EllInftyTheta { theta: Cardinal::Aleph(1) }, cnp, Status::Holds),
        (SP::Df, cnp, Status::Holds),
        (SP::Gdf, cnp, Status::Holds),
        (SP::KOmega, cnp, Status::Holds),
        (
            SP::CountableDirectLimit {
                blocks: vec![SP::Normed, SP::Normed, SP::FrechetSeq { normable: true }],
            },
            cnp,
            Status::Holds,
        ),
        // Rows the rule set deliberately leaves open.
        (SP::RFinSuppUncountable { set_size: Cardinal::Aleph(1) }, cnp, Status::Unknown),
        (SP::subspace(SP::FrechetSeq { normable: false }), cnp, Status::Unknown),
        (SP::EllInftyTheta { theta: Cardinal::Continuum }, np1, Status::Unknown),
    ];
    assert!(corpus.len() >= 12);

    for (space, query, expected) in &corpus {
        let verdict = derive(space, *query).unwrap();
        assert_eq!(
            verdict.status,
            *expected,
            "{} under {query:?}",
            space.describe()
        );
        if verdict.status != Status::Unknown {
            replay(&verdict.derivation)
                .unwrap_or_else(|e| panic!("{}: replay failed: {e}", space.describe()));
        }
    }
    pass(
        6,
        "22-row conformance corpus with sound derivation replay",
        started,
        Duration::from_secs(1),
    );
}

/// Criterion 7: decision tables for test-function multiplication and
/// convolution across a parameter grid, with precondition rejection.
#[test]
fn criterion_7_decision_tables() {
    use Degree::{Finite as D, Infinite as Inf};
    use GroupClass as G;
    use Status::{Fails as F, Holds as H, Unknown as U};
    let started = Instant::now();

    // (group, r, s, t, factor-PE) → (continuous, product estimates).
    let convolution_rows: Vec<(GroupClass, Degree, Degree, Degree, Status, Status, Status)> = vec![
        (G::Finite, D(0), D(0), D(0), H, H, H),
        (G::Finite, D(2), D(1), D(3), F, H, F),
        (G::Finite, Inf, Inf, Inf, U, H, U),
        (G::InfiniteDiscrete { countable: true }, D(0), D(0), D(0), H, H, H),
        (G::InfiniteDiscrete { countable: true }, D(0), D(0), D(0), F, F, F),
        (G::InfiniteDiscrete { countable: false }, D(0), D(0), D(0), H, F, F),
        (G::InfiniteDiscrete { countable: true }, D(0), D(0), D(0), U, U, U),
        (G::InfiniteCompact, D(0), D(0), D(0), H, H, H),
        // The compact-group example: C^0 × C^∞ → C^∞ is continuous but
        // admits no product estimates.
        (G::InfiniteCompact, D(0), Inf, Inf, H, H, F),
        (G::InfiniteCompact, Inf, Inf, Inf, H, H, H),
        (G::InfiniteCompact, D(1), D(2), D(3), F, H, F),
        (G::InfiniteCompact, Inf, Inf, Inf, U, H, U),
        (G::NonCompactNonDiscrete { sigma_compact: true }, Inf, Inf, Inf, H, H, H),
        (G::NonCompactNonDiscrete { sigma_compact: true }, D(0), Inf, Inf, H, F, F),
        (G::NonCompactNonDiscrete { sigma_compact: false }, Inf, Inf, Inf, H, F, F),
        (G::NonCompactNonDiscrete { sigma_compact: true }, D(0), D(0), D(0), H, H, H),
        (G::NonCompactNonDiscrete { sigma_compact: true }, Inf, Inf, Inf, U, U, U),
        (G::NonCompactNonDiscrete { sigma_compact: true }, D(2), D(2), D(4), F, F, F),
    ];
    for (group, r, s, t, b_pe, want_cont, want_pe) in &convolution_rows {
        let out = classify_convolution(*group, *r, *s, *t, *b_pe).unwrap();
        assert_eq!(out.continuous.status, *want_cont, "{group:?} ({r},{s},{t}, b={b_pe:?})");
        assert_eq!(
            out.product_estimates.status,
            *want_pe,
            "{group:?} ({r},{s},{t}, b={b_pe:?})"
        );
        if out.product_estimates.status == H {
            assert_eq!(out.continuous.status, H, "estimates imply continuity");
        }
        for verdict in [&out.continuous, &out.product_estimates] {
            if verdict.status != U {
                replay(&verdict.derivation).unwrap();
            }
        }
    }

    // Scalar multiplication on test functions: continuity ⇔ θ(M)-np.
    let sigma_compact = BaseSpaceDesc {
        kind: BaseSpaceKind::Manifold,
        compact: false,
        components: Cardinal::Finite(1),
        cover_size: None,
    };
    let many_components = BaseSpaceDesc {
        kind: BaseSpaceKind::LocallyCompactParacompact,
        compact: false,
        components: Cardinal::Aleph(1),
        cover_size: None,
    };
    let psi_rows: Vec<(&BaseSpaceDesc, SpacePresentation, Status)> = vec![
        (&sigma_compact, SpacePresentation::Normed, H),
        (&sigma_compact, SpacePresentation::FrechetSeq { normable: true }, H),
        (&sigma_compact, SpacePresentation::FrechetSeq { normable: false }, F),
        (&many_components, SpacePresentation::EllInftyTheta { theta: Cardinal::Aleph(1) }, H),
        (&many_components, SpacePresentation::EllInftyTheta { theta: Cardinal::Aleph(0) }, F),
    ];
    for (base, space, want) in &psi_rows {
        let out = psi_continuity(base, space).unwrap();
        assert_eq!(out.continuous.status, *want, "{}", space.describe());
        assert_eq!(out.hypocontinuous.status, H);
        if out.continuous.status != U {
            replay(&out.continuous.derivation).unwrap();
        }
        replay(&out.hypocontinuous.derivation).unwrap();
    }

    // Precondition rejections.
    let compact = BaseSpaceDesc { compact: true, ..sigma_compact.clone() };
    assert_eq!(
        psi_continuity(&compact, &SpacePresentation::Normed),
        Err(NpError::CompactBase)
    );
    assert!(matches!(
        classify_convolution(G::Finite, D(0), D(0), D(1), H),
        Err(NpError::DegreeViolation { .. })
    ));
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_prodest"))
        .args([
            "classify-convolution",
            "--group",
            "finite",
            "--r",
            "0",
            "--s",
            "0",
            "--t",
            "1",
            "--b-pe",
            "yes",
        ])
        .output()
        .expect("run prodest");
    assert_eq!(out.status.code(), Some(64), "t > r+s must exit 64");

    assert_eq!(convolution_rows.len() + psi_rows.len(), 23);
    pass(
        7,
        "23-row decision-table grid incl. the compact-group example and t ≤ r+s rejection",
        started,
        Duration::from_secs(1),
    );
}

/// Criterion 8: streaming consistency of the triangular constructors.
#[test]
fn criterion_8_streaming_consistency() {
    let started = Instant::now();
    let full = 101usize;
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let r: Vec<Vec<f64>> =
        (0..full).map(|_| (0..full).map(|_| log_uniform(&mut rng)).collect()).collect();
    let s: Vec<Vec<f64>> =
        (0..full).map(|_| (0..full).map(|_| log_uniform(&mut rng)).collect()).collect();
    let t: Vec<Vec<u32>> =
        (0..full).map(|_| (0..full).map(|_| rng.gen_range(0..=50)).collect()).collect();

    let take = |m: &[Vec<f64>], n: usize| {
        Mat::from_rows(m[..n].iter().map(|row| row[..n].to_vec()).collect()).unwrap()
    };
    for n in 1..=100usize {
        let small = schedule_constants(&take(&r, n), &take(&s, n)).unwrap();
        let big = schedule_constants(&take(&r, n + 1), &take(&s, n + 1)).unwrap();
        assert_eq!(&big.a[..n], &small.a[..], "schedule a at n={n}");
        assert_eq!(&big.b[..n], &small.b[..], "schedule b at n={n}");

        let small = bisgaard_split(&take(&r, n)).unwrap();
        let big = bisgaard_split(&take(&r, n + 1)).unwrap();
        assert_eq!(&big.d[..n], &small.d[..], "split at n={n}");

        let tn: Vec<Vec<u32>> = t[..n].iter().map(|row| row[..n].to_vec()).collect();
        let tn1: Vec<Vec<u32>> = t[..n + 1].iter().map(|row| row[..n + 1].to_vec()).collect();
        let small = exponent_schedule(&tn).unwrap();
        let big = exponent_schedule(&tn1).unwrap();
        assert_eq!(&big.r[..n], &small.r[..], "exponents r at n={n}");
        assert_eq!(&big.s[..n], &small.s[..], "exponents s at n={n}");
    }
    pass(
        8,
        "first n constants invariant under n→n+1 extension for all three constructors, n ≤ 100",
        started,
        Duration::from_secs(5),
    );
}
