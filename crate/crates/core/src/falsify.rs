//! Numerical verification of product-estimate witnesses and reproduction
//! of the two desk-scale counterexamples.
//!
//! The checker samples pairs from the model domains in a deterministic
//! order (basis pairs, then sparse and dense random points from a seeded
//! generator) and tests the claimed bound with the tolerance policy
//! `lhs ≤ rhs·(1+1e-9) + 1e-12`. Sampling is one-sided: a pass is not a
//! proof. The search variant adds coordinate-ascent hill climbing from
//! the best random samples.

use crate::models::{
    bump, ck_norm, eval_seminorm, BilinearModel, ModelError, ModelVector, SeqVector, SpaceModel,
};
use crate::seminorm::SeminormExpr;
use crate::witness::ProductEstimateWitness;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative slack for float comparisons.
pub const EPS_REL: f64 = 1e-9;
/// Absolute slack for float comparisons.
pub const EPS_ABS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FalsifyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("target table must be rectangular and non-empty")]
    BadTargets,
    #[error("witness families ({p}×{q}) do not cover the target table ({rows}×{cols})")]
    FamilyTooShort { p: usize, q: usize, rows: usize, cols: usize },
    #[error("grid self-check failed at t={t}: {change:.2}% change under refinement")]
    GridTooCoarse { t: f64, change: f64 },
    #[error("t grid must be strictly decreasing positive values in (0,1]")]
    BadTGrid,
}

/// Sampling strategies, applied in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Strategy {
    Basis,
    RandomSparse,
    RandomDense,
    HillClimb,
}

/// Deterministic sampling plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub seed: u64,
    pub count: usize,
    pub strategies: Vec<Strategy>,
}

impl SampleConfig {
    pub fn new(seed: u64, count: usize) -> Self {
        SampleConfig {
            seed,
            count: count.max(1),
            strategies: vec![
                Strategy::Basis,
                Strategy::RandomSparse,
                Strategy::RandomDense,
                Strategy::HillClimb,
            ],
        }
    }

    fn enabled(&self, s: Strategy) -> bool {
        self.strategies.contains(&s)
    }
}

/// A concrete refutation of the claimed bound. Family indices are
/// one-based, matching the usual doubly indexed notation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub x: ModelVector,
    pub y: ModelVector,
    pub lhs: f64,
    pub rhs: f64,
}

/// Checker outcome. `samples_tried` counts the pairs probed, including
/// the violating one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "camelCase")]
pub enum Outcome {
    #[serde(rename_all = "camelCase")]
    Pass { samples_tried: usize },
    #[serde(rename_all = "camelCase")]
    Violation { violation: Violation, samples_tried: usize },
}

fn violates(lhs: f64, rhs: f64) -> bool {
    lhs > rhs * (1.0 + EPS_REL) + EPS_ABS
}

fn validate_tables(
    targets: &[Vec<SeminormExpr>],
    witness: &ProductEstimateWitness,
) -> Result<(usize, usize), FalsifyError> {
    let rows = targets.len();
    if rows == 0 || targets[0].is_empty() {
        return Err(FalsifyError::BadTargets);
    }
    let cols = targets[0].len();
    if targets.iter().any(|r| r.len() != cols) {
        return Err(FalsifyError::BadTargets);
    }
    if witness.p_family.len() < rows || witness.q_family.len() < cols {
        return Err(FalsifyError::FamilyTooShort {
            p: witness.p_family.len(),
            q: witness.q_family.len(),
            rows,
            cols,
        });
    }
    Ok((rows, cols))
}

/// Worst pair over the target table; `None` when a violation was found.
fn probe_pair(
    model: &BilinearModel,
    targets: &[Vec<SeminormExpr>],
    witness: &ProductEstimateWitness,
    x: &ModelVector,
    y: &ModelVector,
) -> Result<Result<f64, Violation>, FalsifyError> {
    let z = model.eval(x, y)?;
    let mut worst = 0.0f64;
    for (i, row) in targets.iter().enumerate() {
        let px = eval_seminorm(&witness.p_family[i], x)?;
        for (j, target) in row.iter().enumerate() {
            let lhs = eval_seminorm(target, &z)?;
            let qy = eval_seminorm(&witness.q_family[j], y)?;
            let rhs = px * qy;
            if violates(lhs, rhs) {
                return Ok(Err(Violation {
                    i: i + 1,
                    j: j + 1,
                    x: x.clone(),
                    y: y.clone(),
                    lhs,
                    rhs,
                }));
            }
            worst = worst.max(lhs / (rhs + EPS_ABS));
        }
    }
    Ok(Ok(worst))
}

// Flat coordinate access across vector kinds, used by the sparse sampler
// and the hill climber.

fn flat_len(v: &ModelVector) -> usize {
    match v {
        ModelVector::Seq(s) => s.truncation(),
        ModelVector::Grid(g) => g.len(),
        ModelVector::Blocks { blocks } => blocks.iter().map(flat_len).sum(),
    }
}

fn flat_add(v: &mut ModelVector, idx: usize, delta: f64) {
    match v {
        ModelVector::Seq(s) => s.entries_mut()[idx] += delta,
        ModelVector::Grid(g) => g.samples_mut()[idx] += delta,
        ModelVector::Blocks { blocks } => {
            let mut offset = 0;
            for b in blocks.iter_mut() {
                let len = flat_len(b);
                if idx < offset + len {
                    flat_add(b, idx - offset, delta);
                    return;
                }
                offset += len;
            }
            panic!("flat index {idx} out of range");
        }
    }
}

fn basis_vectors(space: &SpaceModel) -> Vec<ModelVector> {
    let dim = space.dimension();
    (0..dim)
        .map(|i| {
            let mut v = space.zero();
            flat_add(&mut v, i, 1.0);
            v
        })
        .collect()
}

fn random_dense(space: &SpaceModel, rng: &mut ChaCha8Rng) -> ModelVector {
    let mut v = space.zero();
    for i in 0..space.dimension() {
        flat_add(&mut v, i, rng.gen_range(-1.0..1.0));
    }
    v
}

fn random_sparse(space: &SpaceModel, rng: &mut ChaCha8Rng) -> ModelVector {
    let dim = space.dimension();
    let nonzeros = (dim / 8).max(1);
    let mut v = space.zero();
    for _ in 0..nonzeros {
        let idx = rng.gen_range(0..dim);
        flat_add(&mut v, idx, rng.gen_range(-2.0..2.0));
    }
    v
}

/// Streams sample pairs in deterministic order, stopping early on `Err`.
fn stream_samples<E>(
    model: &BilinearModel,
    cfg: &SampleConfig,
    mut visit: impl FnMut(&ModelVector, &ModelVector) -> Result<(), E>,
) -> Result<usize, E> {
    let mut tried = 0usize;
    let budget = cfg.count;

    if cfg.enabled(Strategy::Basis) {
        let left = basis_vectors(&model.left);
        let right = basis_vectors(&model.right);
        'basis: for x in &left {
            for y in &right {
                if tried >= budget {
                    break 'basis;
                }
                visit(x, y)?;
                tried += 1;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sparse = cfg.enabled(Strategy::RandomSparse);
    let dense = cfg.enabled(Strategy::RandomDense);
    while tried < budget && (sparse || dense) {
        if sparse && tried < budget {
            let x = random_sparse(&model.left, &mut rng);
            let y = random_sparse(&model.right, &mut rng);
            visit(&x, &y)?;
            tried += 1;
        }
        if dense && tried < budget {
            let x = random_dense(&model.left, &mut rng);
            let y = random_dense(&model.right, &mut rng);
            visit(&x, &y)?;
            tried += 1;
        }
    }
    Ok(tried)
}

/// Tests the witness bound `p_{i,j}(β(x,y)) ≤ p_i(x)·q_j(y)` on sampled
/// pairs. Returns the first violation in sample order, deterministically
/// for a given seed.
pub fn check(
    model: &BilinearModel,
    targets: &[Vec<SeminormExpr>],
    witness: &ProductEstimateWitness,
    cfg: &SampleConfig,
) -> Result<Outcome, FalsifyError> {
    validate_tables(targets, witness)?;
    let mut found: Option<Violation> = None;
    let mut seen = 0usize;
    let tried = stream_samples(model, cfg, |x, y| {
        seen += 1;
        match probe_pair(model, targets, witness, x, y) {
            Err(e) => Err(Some(e)),
            Ok(Err(v)) => {
                found = Some(v);
                Err(None)
            }
            Ok(Ok(_)) => Ok(()),
        }
    });
    match tried {
        Ok(samples_tried) => Ok(Outcome::Pass { samples_tried }),
        Err(Some(e)) => Err(e),
        Err(None) => Ok(Outcome::Violation {
            violation: found.expect("violation recorded"),
            samples_tried: seen,
        }),
    }
}

const CLIMB_STEPS: usize = 200;
const CLIMB_RESTARTS: usize = 8;

/// Like [`check`], plus coordinate-ascent hill climbing from the best
/// random samples (8 restarts, 200 steps each, step halving on failure).
pub fn search(
    model: &BilinearModel,
    targets: &[Vec<SeminormExpr>],
    witness: &ProductEstimateWitness,
    cfg: &SampleConfig,
) -> Result<Outcome, FalsifyError> {
    validate_tables(targets, witness)?;

    // Base sampling pass, tracking the most adversarial samples.
    let mut found: Option<Violation> = None;
    let mut seen = 0usize;
    let mut top: Vec<(f64, ModelVector, ModelVector)> = Vec::new();
    let tried = stream_samples(model, cfg, |x, y| {
        seen += 1;
        match probe_pair(model, targets, witness, x, y) {
            Err(e) => Err(Some(e)),
            Ok(Err(v)) => {
                found = Some(v);
                Err(None)
            }
            Ok(Ok(objective)) => {
                // Strict inequality keeps earlier samples on ties.
                if top.len() < CLIMB_RESTARTS {
                    top.push((objective, x.clone(), y.clone()));
                    top.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
                } else if objective > top.last().map(|t| t.0).unwrap_or(f64::INFINITY) {
                    top.pop();
                    top.push((objective, x.clone(), y.clone()));
                    top.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
                }
                Ok(())
            }
        }
    });
    let samples_tried = match tried {
        Ok(n) => n,
        Err(Some(e)) => return Err(e),
        Err(None) => {
            return Ok(Outcome::Violation {
                violation: found.expect("violation recorded"),
                samples_tried: seen,
            })
        }
    };

    if !cfg.enabled(Strategy::HillClimb) {
        return Ok(Outcome::Pass { samples_tried });
    }

    let objective = |x: &ModelVector, y: &ModelVector| -> Result<Result<f64, Violation>, FalsifyError> {
        probe_pair(model, targets, witness, x, y)
    };

    for (_, x0, y0) in top {
        let mut x = x0;
        let mut y = y0;
        let mut best = match objective(&x, &y)? {
            Ok(v) => v,
            Err(v) => return Ok(Outcome::Violation { violation: v, samples_tried: seen }),
        };
        let dx = flat_len(&x);
        let dy = flat_len(&y);
        let mut step = 0.5f64;
        for k in 0..CLIMB_STEPS {
            let coord = k % (dx + dy);
            let mut improved = false;
            for sign in [1.0, -1.0] {
                let mut cx = x.clone();
                let mut cy = y.clone();
                if coord < dx {
                    flat_add(&mut cx, coord, sign * step);
                } else {
                    flat_add(&mut cy, coord - dx, sign * step);
                }
                match objective(&cx, &cy)? {
                    Err(v) => return Ok(Outcome::Violation { violation: v, samples_tried: seen }),
                    Ok(value) => {
                        if value > best {
                            best = value;
                            x = cx;
                            y = cy;
                            improved = true;
                            break;
                        }
                    }
                }
            }
            if !improved {
                step = (step * 0.5).max(1e-9);
            }
        }
    }
    Ok(Outcome::Pass { samples_tried })
}

/// Recomputes a reported violation from its stored data.
pub fn replay_violation(
    model: &BilinearModel,
    targets: &[Vec<SeminormExpr>],
    witness: &ProductEstimateWitness,
    v: &Violation,
) -> Result<(f64, f64), FalsifyError> {
    let z = model.eval(&v.x, &v.y)?;
    let lhs = eval_seminorm(&targets[v.i - 1][v.j - 1], &z)?;
    let rhs = eval_seminorm(&witness.p_family[v.i - 1], &v.x)?
        * eval_seminorm(&witness.q_family[v.j - 1], &v.y)?;
    Ok((lhs, rhs))
}

/// Note attached to sequence-product reproduction reports: both candidate
/// factors are evaluated at the same basis vector.
pub const SEQUENCE_PRODUCT_NOTE: &str =
    "rhs evaluates both candidate factors at the basis vector e_{n+1}: rhs = p_1(e_{n+1})·q_n(e_{n+1}) = 0";

/// The prefix-seminorm counterexample for pointwise multiplication of
/// sequences: with targets `p_{i,j} = ‖·‖_{i+j}` and any candidate
/// `p_1 ≤ r·‖·‖_n`, the basis vector e_{n+1} gives
/// `p_{1,n}(β(e_{n+1},e_{n+1})) = ‖e_{n+1}‖_{n+1} = 1` against
/// `p_1(e_{n+1})·q_n(e_{n+1}) = 0`. All values are exact in {0,1}.
pub fn sequence_product_violation(n: u32, r: f64) -> Violation {
    let truncation = n as usize + 1;
    let e = ModelVector::Seq(SeqVector::basis(truncation, n as usize));
    let model = BilinearModel::pointwise_seq(truncation);
    let z = model.eval(&e, &e).expect("pointwise product");

    let target = SeminormExpr::prefix_sup(1 + n);
    let p1 = SeminormExpr::scale(r, SeminormExpr::prefix_sup(n));
    let qn = SeminormExpr::prefix_sup(n);

    let lhs = eval_seminorm(&target, &z).expect("prefix norms evaluate on sequences");
    let rhs = eval_seminorm(&p1, &e).unwrap() * eval_seminorm(&qn, &e).unwrap();
    Violation { i: 1, j: n as usize, x: e.clone(), y: e, lhs, rhs }
}

/// One sampled scale in a blow-up report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BlowupPoint {
    pub t: f64,
    pub ck: f64,
    pub ck_next: f64,
    pub ratio: f64,
}

/// Result of the bump-family blow-up experiment: the C^{k+1}/C^k norm
/// ratio of `g_t` must double under each halving of t, while the C^k
/// norms stay bounded by the base-bump constant S.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BlowupReport {
    pub k: u32,
    pub points: Vec<BlowupPoint>,
    /// ratio(t/2)/ratio(t) for consecutive halvings.
    pub quotients: Vec<f64>,
    pub sup_ck: f64,
    pub s_bound: f64,
    /// All quotients (at least one) within [1.8, 2.2].
    pub certified: bool,
}

/// Interval count giving spacing at most `t`/`divisor`.
fn bump_intervals(t: f64, divisor: f64) -> usize {
    (divisor / t).ceil() as usize
}

fn bump_ck(t: f64, k: u32, order: u32, divisor: f64) -> Result<f64, FalsifyError> {
    let g = bump(t, k, bump_intervals(t, divisor))?;
    Ok(ck_norm(&g, order)?)
}

/// Runs the blow-up experiment for derivative order `k` over a strictly
/// decreasing grid of scales (consecutive halvings yield quotients).
///
/// Grids are t-adaptive (spacing t/512) with an order-two self-check:
/// refining to t/1024 must change the norms by less than 2%.
pub fn bump_blowup(k: u32, t_grid: &[f64]) -> Result<BlowupReport, FalsifyError> {
    if t_grid.is_empty()
        || t_grid.iter().any(|t| !t.is_finite() || *t <= 0.0 || *t > 1.0)
        || t_grid.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(FalsifyError::BadTGrid);
    }

    let mut points = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let ck = bump_ck(t, k, k, 512.0)?;
        let ck_next = bump_ck(t, k, k + 1, 512.0)?;
        // Order-two self-check on the C^k norm under refinement. The
        // (k+1)-order norm enters only through the ratio, where the
        // t-proportional grids make the stencil bias cancel exactly
        // across scales; the quotient band is its guard.
        let ck_fine = bump_ck(t, k, k, 1024.0)?;
        let change = (ck - ck_fine).abs() / ck_fine.max(f64::MIN_POSITIVE);
        if change > 0.02 {
            return Err(FalsifyError::GridTooCoarse { t, change: change * 100.0 });
        }
        points.push(BlowupPoint { t, ck, ck_next, ratio: ck_next / ck });
    }

    let quotients: Vec<f64> = points
        .windows(2)
        .filter(|w| (w[1].t - w[0].t / 2.0).abs() <= 1e-9 * w[0].t)
        .map(|w| w[1].ratio / w[0].ratio)
        .collect();
    let sup_ck = points.iter().fold(0.0f64, |m, p| m.max(p.ck));

    // S from the base bump on a fine grid; only derivatives up to k enter.
    let base = bump(1.0, 0, 1 << 16)?;
    let s_bound = ck_norm(&base, k)?;

    let certified = !quotients.is_empty() && quotients.iter().all(|q| (1.8..=2.2).contains(q));
    Ok(BlowupReport { k, points, quotients, sup_ck, s_bound, certified })
}
