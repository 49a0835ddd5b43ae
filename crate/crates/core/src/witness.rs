//! Constructive product-estimate witnesses.
//!
//! A bilinear map β admits product estimates when every doubly indexed
//! family of target seminorms p_{i,j} on the codomain can be bounded as
//! p_{i,j}(β(x,y)) ≤ p_i(x)·q_j(y) by two singly indexed families. The
//! builders here produce such families explicitly from domination data,
//! by scheduling constants along triangular maxima. All three scheduling
//! constructors are streaming-consistent: growing the input matrix never
//! changes the constants already emitted.

use crate::seminorm::{SeminormExpr, WeightMap};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WitnessError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix entries must be strictly positive, got {0} at ({1},{2})")]
    NonPositiveEntry(f64, usize, usize),
    #[error("missing certificate: {0}")]
    MissingCert(String),
}

/// Rectangular matrix of reals, ingested from JSON as an array of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, WitnessError> {
        let r = rows.len();
        if r == 0 {
            return Err(WitnessError::ShapeMismatch("matrix needs at least one row".into()));
        }
        let c = rows[0].len();
        if c == 0 {
            return Err(WitnessError::ShapeMismatch("matrix needs at least one column".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(WitnessError::ShapeMismatch("ragged rows".into()));
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a full `rows × cols` matrix from sparse entries; any hole is
    /// a missing certificate.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = ((usize, usize), f64)>,
    ) -> Result<Self, WitnessError> {
        let mut data = vec![f64::NAN; rows * cols];
        for ((i, j), v) in entries {
            if i >= rows || j >= cols {
                return Err(WitnessError::ShapeMismatch(format!(
                    "entry ({i},{j}) outside {rows}×{cols}"
                )));
            }
            data[i * cols + j] = v;
        }
        if let Some(pos) = data.iter().position(|v| v.is_nan()) {
            return Err(WitnessError::MissingCert(format!(
                "no domination constant for pair ({}, {})",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_positive(&self) -> Result<(), WitnessError> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if !v.is_finite() || v <= 0.0 {
                    return Err(WitnessError::NonPositiveEntry(v, i, j));
                }
            }
        }
        Ok(())
    }
}

impl TryFrom<Vec<Vec<f64>>> for Mat {
    type Error = WitnessError;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self, Self::Error> {
        Mat::from_rows(rows)
    }
}

impl From<Mat> for Vec<Vec<f64>> {
    fn from(m: Mat) -> Self {
        (0..m.rows)
            .map(|i| m.data[i * m.cols..(i + 1) * m.cols].to_vec())
            .collect()
    }
}

/// Output of [`schedule_constants`]: per-row factors `a` and per-column
/// factors `b` with `a_i·b_j ≥ r_{i,j}·s_{i,j}` everywhere; all ≥ 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleResult {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// Row factor `a_i = max(1, r_{i,1}s_{i,1}, …, r_{i,i}s_{i,i})` and column
/// factor `b_j = max(1, r_{1,j}s_{1,j}, …, r_{j−1,j}s_{j−1,j})`.
///
/// For i ≥ j the product r_{i,j}s_{i,j} is swallowed by `a_i`, for i < j by
/// `b_j`, so `a_i·b_j ≥ r_{i,j}s_{i,j}` holds in every cell.
pub fn schedule_constants(r: &Mat, s: &Mat) -> Result<ScheduleResult, WitnessError> {
    if (r.rows, r.cols) != (s.rows, s.cols) {
        return Err(WitnessError::ShapeMismatch(format!(
            "r is {}×{}, s is {}×{}",
            r.rows, r.cols, s.rows, s.cols
        )));
    }
    r.check_positive()?;
    s.check_positive()?;

    let a: Vec<f64> = (0..r.rows)
        .map(|i| {
            (0..=i.min(r.cols - 1))
                .map(|j| r.get(i, j) * s.get(i, j))
                .fold(1.0f64, f64::max)
        })
        .collect();
    let b: Vec<f64> = (0..r.cols)
        .map(|j| {
            (0..j.min(r.rows))
                .map(|i| r.get(i, j) * s.get(i, j))
                .fold(1.0f64, f64::max)
        })
        .collect();
    Ok(ScheduleResult { a, b })
}

/// Output of [`bisgaard_split`]: `d_i·d_j ≥ C_{i,j}` with `c_i = 1/d_i`,
/// so `c_i·c_j ≤ 1/C_{i,j}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitResult {
    pub c: Vec<f64>,
    pub d: Vec<f64>,
}

/// Triangular split `d_i = max(1, max_{k≤i} C_{i,k}, max_{k≤i} C_{k,i})`.
///
/// For i ≥ j the entry C_{i,j} appears in the row maximum of `d_i`, for
/// i < j in the column maximum of `d_j`; the other factor is ≥ 1.
pub fn bisgaard_split(c: &Mat) -> Result<SplitResult, WitnessError> {
    if !c.is_square() {
        return Err(WitnessError::ShapeMismatch(format!(
            "split needs a square matrix, got {}×{}",
            c.rows, c.cols
        )));
    }
    c.check_positive()?;
    let d: Vec<f64> = (0..c.rows)
        .map(|i| {
            (0..=i)
                .flat_map(|k| [c.get(i, k), c.get(k, i)])
                .fold(1.0f64, f64::max)
        })
        .collect();
    let inv = d.iter().map(|v| 1.0 / v).collect();
    Ok(SplitResult { c: inv, d })
}

/// Output of [`exponent_schedule`]: `r_α + s_β ≥ t_{α,β}` everywhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentSchedule {
    pub r: Vec<u32>,
    pub s: Vec<u32>,
}

/// `r_α = max_{β≤α} t_{α,β}` and `s_β = max_{α≤β} t_{α,β}`.
pub fn exponent_schedule(t: &[Vec<u32>]) -> Result<ExponentSchedule, WitnessError> {
    let rows = t.len();
    if rows == 0 || t[0].is_empty() {
        return Err(WitnessError::ShapeMismatch("exponent table needs entries".into()));
    }
    let cols = t[0].len();
    if t.iter().any(|row| row.len() != cols) {
        return Err(WitnessError::ShapeMismatch("ragged rows".into()));
    }
    let r: Vec<u32> = (0..rows)
        .map(|i| (0..=i.min(cols - 1)).map(|j| t[i][j]).max().unwrap_or(0))
        .collect();
    let s: Vec<u32> = (0..cols)
        .map(|j| (0..=j.min(rows - 1)).map(|i| t[i][j]).max().unwrap_or(0))
        .collect();
    Ok(ExponentSchedule { r, s })
}

/// An explicit product-estimate witness: the two seminorm families plus the
/// construction steps that justify them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProductEstimateWitness {
    pub p_family: Vec<SeminormExpr>,
    pub q_family: Vec<SeminormExpr>,
    pub provenance: Vec<String>,
}

/// Domination data for one side of a continuity estimate: each auxiliary
/// seminorm P_{i,j} satisfies `P_{i,j} ≤ constants[i][j] · target`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationTable {
    pub target: SeminormExpr,
    pub constants: Mat,
}

/// Witness from upper bounds on both factor sides.
///
/// Assumes continuity certificates `p_{i,j}(β(x,y)) ≤ P_{i,j}(x)·Q_{i,j}(y)`
/// together with `P_{i,j} ≤ r_{i,j}·p` and `Q_{i,j} ≤ s_{i,j}·q`. Returns
/// `p_i = a_i·p` and `q_j = b_j·q` with the scheduled constants.
pub fn cnp_product_estimates(
    p_bound: &DominationTable,
    q_bound: &DominationTable,
) -> Result<ProductEstimateWitness, WitnessError> {
    let schedule = schedule_constants(&p_bound.constants, &q_bound.constants)?;
    let p_family = schedule
        .a
        .iter()
        .map(|&a| SeminormExpr::scale(a, p_bound.target.clone()))
        .collect();
    let q_family = schedule
        .b
        .iter()
        .map(|&b| SeminormExpr::scale(b, q_bound.target.clone()))
        .collect();
    Ok(ProductEstimateWitness {
        p_family,
        q_family,
        provenance: vec![
            "input: p_{i,j}(β(x,y)) ≤ P_{i,j}(x)·Q_{i,j}(y) with P_{i,j} ≤ r_{i,j}·p, Q_{i,j} ≤ s_{i,j}·q".into(),
            "a_i = max(1, r_{i,1}s_{i,1}, …, r_{i,i}s_{i,i}); b_j = max(1, r_{1,j}s_{1,j}, …, r_{j-1,j}s_{j-1,j})".into(),
            "a_i·b_j ≥ r_{i,j}s_{i,j}, so p_i := a_i·p and q_j := b_j·q give p_{i,j}(β(x,y)) ≤ p_i(x)·q_j(y)".into(),
        ],
    })
}

/// Witness from an upper bound on the codomain side.
///
/// Assumes `p_{i,j} ≤ C_{i,j}·P` on the codomain and one continuity
/// certificate `P(β(x,y)) ≤ p(x)·q(y)`. Splitting C gives d with
/// `d_i·d_j ≥ C_{i,j}`; the families are `p_i = d_i·p`, `q_j = d_j·q`.
pub fn target_cnp_product_estimates(
    target_bound: &DominationTable,
    p: &SeminormExpr,
    q: &SeminormExpr,
) -> Result<ProductEstimateWitness, WitnessError> {
    let split = bisgaard_split(&target_bound.constants)?;
    let p_family = split
        .d
        .iter()
        .map(|&d| SeminormExpr::scale(d, p.clone()))
        .collect();
    let q_family = split
        .d
        .iter()
        .map(|&d| SeminormExpr::scale(d, q.clone()))
        .collect();
    Ok(ProductEstimateWitness {
        p_family,
        q_family,
        provenance: vec![
            format!(
                "input: p_{{i,j}} ≤ C_{{i,j}}·P on the codomain with P = {}, and P(β(x,y)) ≤ p(x)·q(y)",
                target_bound.target
            ),
            "d_i = max(1, max_{k≤i} C_{i,k}, max_{k≤i} C_{k,i}); c_i = 1/d_i satisfies c_i·c_j ≤ 1/C_{i,j}".into(),
            "p_{i,j}(β(x,y)) ≤ C_{i,j}·P(β(x,y)) ≤ C_{i,j}·p(x)·q(y) ≤ d_i·d_j·p(x)·q(y) = p_i(x)·q_j(y)".into(),
        ],
    })
}

/// Per-cell constant table `C[i][j][σ][τ]`, ingested as nested JSON arrays.
pub type FourIndex = Vec<Vec<Vec<Vec<f64>>>>;

/// Blockwise witness tables for a direct-sum bilinear map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DirectSumWitness {
    /// `P_σ` as blockwise sums with weights `u[i][σ] = d_i`.
    pub p_table: Vec<SeminormExpr>,
    /// `Q_τ` as blockwise sums with weights `v[j][τ] = d_j`.
    pub q_table: Vec<SeminormExpr>,
    pub u: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    pub provenance: Vec<String>,
}

/// Combines per-block estimates `P_{σ,τ}(β_{i,j}(x,y)) ≤ C[i][j][σ][τ]·
/// P_{i,σ}(x)·Q_{j,τ}(y)` into product estimates for the direct-sum map
/// `((x_i),(y_j)) ↦ Σ_{i,j} β_{i,j}(x_i,y_j)`.
///
/// The (σ,τ)-dependence is collapsed by `D[i][j] = max_{σ,τ} C[i][j][σ][τ]`
/// before splitting, so the block weights are uniform in σ and τ; the sum
/// form makes the Σ_{i,j} factorization exact.
pub fn direct_sum_combine(
    c: &FourIndex,
    p_blocks: &[Vec<SeminormExpr>],
    q_blocks: &[Vec<SeminormExpr>],
) -> Result<DirectSumWitness, WitnessError> {
    let blocks = c.len();
    if blocks == 0 {
        return Err(WitnessError::ShapeMismatch("no blocks".into()));
    }
    if c.iter().any(|row| row.len() != blocks) {
        return Err(WitnessError::ShapeMismatch("C must be square in (i,j)".into()));
    }
    let sigma = c[0][0].len();
    let tau = if sigma > 0 { c[0][0][0].len() } else { 0 };
    if sigma == 0 || tau == 0 {
        return Err(WitnessError::ShapeMismatch("C needs (σ,τ) entries".into()));
    }
    for row in c {
        for cell in row {
            if cell.len() != sigma || cell.iter().any(|col| col.len() != tau) {
                return Err(WitnessError::ShapeMismatch("ragged (σ,τ) table".into()));
            }
        }
    }
    if p_blocks.len() != blocks || q_blocks.len() != blocks {
        return Err(WitnessError::ShapeMismatch(format!(
            "need {blocks} per-block seminorm rows on each side"
        )));
    }
    if p_blocks.iter().any(|r| r.len() != sigma) || q_blocks.iter().any(|r| r.len() != tau) {
        return Err(WitnessError::ShapeMismatch(
            "per-block tables must cover all σ (resp. τ)".into(),
        ));
    }

    // Collapse (σ,τ), then split the block-level table.
    let d_rows: Vec<Vec<f64>> = (0..blocks)
        .map(|i| {
            (0..blocks)
                .map(|j| {
                    c[i][j]
                        .iter()
                        .flatten()
                        .copied()
                        .fold(f64::NEG_INFINITY, f64::max)
                })
                .collect()
        })
        .collect();
    let d_mat = Mat::from_rows(d_rows)?;
    let split = bisgaard_split(&d_mat)?;

    let u: Vec<Vec<f64>> = split.d.iter().map(|&d| vec![d; sigma]).collect();
    let v: Vec<Vec<f64>> = split.d.iter().map(|&d| vec![d; tau]).collect();

    let p_table: Vec<SeminormExpr> = (0..sigma)
        .map(|s| SeminormExpr::BlockSum {
            terms: (0..blocks).map(|i| (u[i][s], p_blocks[i][s].clone())).collect(),
        })
        .collect();
    let q_table: Vec<SeminormExpr> = (0..tau)
        .map(|t| SeminormExpr::BlockSum {
            terms: (0..blocks).map(|j| (v[j][t], q_blocks[j][t].clone())).collect(),
        })
        .collect();

    Ok(DirectSumWitness {
        p_table,
        q_table,
        u,
        v,
        provenance: vec![
            "D[i][j] = max_{σ,τ} C[i][j][σ][τ]; d from the triangular split of D".into(),
            "u[i][σ] = d_i, v[j][τ] = d_j, so u[i][σ]·v[j][τ] ≥ D[i][j] ≥ C[i][j][σ][τ]".into(),
            "P_σ = Σ_i u[i][σ]·P_{i,σ} and Q_τ = Σ_j v[j][τ]·Q_{j,τ} close the chain: P_{σ,τ}(β(x,y)) ≤ Σ_{i,j} C·P_{i,σ}(x_i)·Q_{j,τ}(y_j) ≤ P_σ(x)·Q_τ(y)".into(),
        ],
    })
}

/// Per-family certificates for precomposition with a linear map:
/// `family[i]∘λ ≤ constants[i]·targets[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyCerts {
    pub constants: Vec<f64>,
    pub targets: Vec<SeminormExpr>,
}

/// Transport data: precomposition certificates for the two factor maps
/// and/or a table for postcomposition with a map out of the codomain
/// (`t_{i,j}∘Λ ≤ post[i][j]·p_{i,j}`).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TransportSpec {
    pub lambda1: Option<FamilyCerts>,
    pub lambda2: Option<FamilyCerts>,
    pub post: Option<Mat>,
}

fn precompose(
    family: &[SeminormExpr],
    certs: &FamilyCerts,
    side: &str,
) -> Result<Vec<SeminormExpr>, WitnessError> {
    if certs.constants.len() < family.len() || certs.targets.len() < family.len() {
        return Err(WitnessError::MissingCert(format!(
            "{side}: {} certificates for a family of {}",
            certs.constants.len().min(certs.targets.len()),
            family.len()
        )));
    }
    if let Some((k, &c)) = certs
        .constants
        .iter()
        .enumerate()
        .find(|(_, c)| !c.is_finite() || **c <= 0.0)
    {
        return Err(WitnessError::NonPositiveEntry(c, k, 0));
    }
    Ok(family
        .iter()
        .enumerate()
        .map(|(k, _)| SeminormExpr::scale(certs.constants[k], certs.targets[k].clone()))
        .collect())
}

/// Transports a witness through continuous linear maps, multiplying
/// constants. Postcomposition constants are folded into the p-side.
pub fn transport(
    witness: &ProductEstimateWitness,
    spec: &TransportSpec,
) -> Result<ProductEstimateWitness, WitnessError> {
    let mut p_family = witness.p_family.clone();
    let mut q_family = witness.q_family.clone();
    let mut provenance = witness.provenance.clone();

    if let Some(post) = &spec.post {
        post.check_positive()?;
        if post.rows() < p_family.len() || post.cols() < q_family.len() {
            return Err(WitnessError::MissingCert(format!(
                "postcomposition table {}×{} for families of {}×{}",
                post.rows(),
                post.cols(),
                p_family.len(),
                q_family.len()
            )));
        }
        p_family = p_family
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let row_max = (0..q_family.len())
                    .map(|j| post.get(i, j))
                    .fold(1.0f64, f64::max);
                SeminormExpr::scale(row_max, p.clone())
            })
            .collect();
        provenance.push(
            "postcomposition: t_{i,j}∘Λ ≤ C_{i,j}·p_{i,j}; row maxima folded into the p-side"
                .into(),
        );
    }
    if let Some(l1) = &spec.lambda1 {
        p_family = precompose(&p_family, l1, "λ₁")?;
        provenance.push("precomposition on the left factor: p_i∘λ₁ ≤ c_i·p'_i".into());
    }
    if let Some(l2) = &spec.lambda2 {
        q_family = precompose(&q_family, l2, "λ₂")?;
        provenance.push("precomposition on the right factor: q_j∘λ₂ ≤ c_j·q'_j".into());
    }
    Ok(ProductEstimateWitness { p_family, q_family, provenance })
}

/// Two-sided certificates for a topological embedding Λ of the codomain:
/// `t_{i,j}∘Λ ≤ forward[i][j]·p_{i,j}` and `p_{i,j} ≤ backward[i][j]·(t_{i,j}∘Λ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingCerts {
    pub forward: Mat,
    pub backward: Mat,
}

/// Pulls a witness for `Λ∘β` back to one for `β` when Λ is an embedding.
///
/// Uses the backward bounds; row maxima are folded into the p-side.
pub fn pull_back_embedding(
    witness: &ProductEstimateWitness,
    emb: &EmbeddingCerts,
) -> Result<ProductEstimateWitness, WitnessError> {
    emb.forward.check_positive()?;
    emb.backward.check_positive()?;
    if (emb.forward.rows(), emb.forward.cols()) != (emb.backward.rows(), emb.backward.cols()) {
        return Err(WitnessError::ShapeMismatch(
            "embedding certificate tables must have equal shape".into(),
        ));
    }
    if emb.backward.rows() < witness.p_family.len()
        || emb.backward.cols() < witness.q_family.len()
    {
        return Err(WitnessError::MissingCert(
            "embedding certificates do not cover the witness families".into(),
        ));
    }
    let p_family = witness
        .p_family
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let row_max = (0..witness.q_family.len())
                .map(|j| emb.backward.get(i, j))
                .fold(1.0f64, f64::max);
            SeminormExpr::scale(row_max, p.clone())
        })
        .collect();
    let mut provenance = witness.provenance.clone();
    provenance.push(
        "embedding pull-back: p_{i,j} ≤ B_{i,j}·(t_{i,j}∘Λ) ≤ B_{i,j}·p_i(x)·q_j(y); row maxima folded into the p-side".into(),
    );
    Ok(ProductEstimateWitness {
        p_family,
        q_family: witness.q_family.clone(),
        provenance,
    })
}

/// Witness for pointwise multiplication of finitely supported functions
/// when the targets are weighted sups `p_{v_{i,j}}`.
///
/// The supports of the v_{i,j} are collected into one countable set C; on
/// the restriction to C, `v(m)|x_m y_m| = (√v(m)|x_m|)·(√v(m)|y_m|)` gives
/// continuity certificates with factors `p_{√v_{i,j}}`, all dominated by
/// the pointwise maximum u of the √v_{i,j}. Scheduling those constants
/// yields the families.
pub fn weighted_sup_witness(
    weights: &[Vec<WeightMap>],
) -> Result<(ProductEstimateWitness, BTreeSet<u64>), WitnessError> {
    let rows = weights.len();
    if rows == 0 || weights[0].is_empty() {
        return Err(WitnessError::ShapeMismatch("need at least one weight map".into()));
    }
    let cols = weights[0].len();
    if weights.iter().any(|r| r.len() != cols) {
        return Err(WitnessError::ShapeMismatch("ragged weight table".into()));
    }

    let mut support = BTreeSet::new();
    let mut envelope = WeightMap::new();
    for row in weights {
        for v in row {
            for (&m, &w) in v {
                if w < 0.0 || !w.is_finite() {
                    return Err(WitnessError::NonPositiveEntry(w, m as usize, 0));
                }
                if w > 0.0 {
                    support.insert(m);
                    let sq = w.sqrt();
                    let slot = envelope.entry(m).or_insert(0.0);
                    if sq > *slot {
                        *slot = sq;
                    }
                }
            }
        }
    }

    // Domination constants of each √v_{i,j} against the envelope.
    let ratio = |v: &WeightMap| -> f64 {
        v.iter()
            .filter(|(_, w)| **w > 0.0)
            .map(|(m, &w)| w.sqrt() / envelope[m])
            .fold(f64::MIN_POSITIVE, f64::max)
    };
    let r = Mat::from_rows(
        weights
            .iter()
            .map(|row| row.iter().map(ratio).collect())
            .collect(),
    )?;
    let u_expr = SeminormExpr::weighted_sup(envelope);
    let table = DominationTable { target: u_expr, constants: r };
    let mut witness = cnp_product_estimates(&table, &table)?;
    witness.provenance.insert(
        0,
        format!(
            "targets p_{{v_{{i,j}}}} restrict to the countable support union C ({} points); factors p_{{√v_{{i,j}}}} are dominated by the pointwise envelope u = max √v_{{i,j}}",
            support.len()
        ),
    );
    Ok((witness, support))
}
