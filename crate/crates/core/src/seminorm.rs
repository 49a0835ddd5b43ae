//! Space presentations, symbolic seminorms, and the domination pre-order.
//!
//! A [`SpacePresentation`] is a small AST naming how a locally convex space
//! was built (normed, Fréchet by a seminorm sequence, direct sums, products,
//! subspaces, quotients, ...). A [`SeminormExpr`] is a symbolic seminorm on
//! such a presentation. [`dominates`] searches for a certificate `p ≤ C·q`;
//! it is sound but deliberately incomplete — an absent certificate is not a
//! refutation.

use crate::cardinal::Cardinal;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Weight function with finite (desk-scale) support, indexed by coordinate.
pub type WeightMap = BTreeMap<u64, f64>;

/// JSON objects key weights by stringified indices; the explicit codec
/// keeps that working inside tagged enums, whose buffered deserialization
/// bypasses serde_json's integer-key handling.
mod weight_map_serde {
    use super::WeightMap;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(map: &WeightMap, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(map.iter().map(|(k, v)| (k.to_string(), v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<WeightMap, D::Error> {
        let raw: BTreeMap<String, f64> = Deserialize::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                k.parse::<u64>()
                    .map(|k| (k, v))
                    .map_err(|_| D::Error::custom(format!("weight index {k:?} is not an integer")))
            })
            .collect()
    }
}

/// Block structure of a direct sum: one block repeated over the whole index
/// set, or an explicit finite list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DirectSumBlocks {
    Uniform { block: Box<SpacePresentation> },
    Listed { blocks: Vec<SpacePresentation> },
}

/// Syntactic presentation of a locally convex space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "camelCase")]
pub enum SpacePresentation {
    /// A normed space.
    Normed,
    /// Metrizable space presented by a countable seminorm sequence. Whether
    /// the sequence is equivalent to a single norm is a declared input flag,
    /// never inferred.
    FrechetSeq { normable: bool },
    /// Locally convex direct sum over an index set of the given cardinality.
    #[serde(rename_all = "camelCase")]
    DirectSum {
        index: Cardinal,
        #[serde(flatten)]
        blocks: DirectSumBlocks,
    },
    /// Finite product.
    Product { blocks: Vec<SpacePresentation> },
    /// A vector subspace with the induced topology.
    Subspace { of: Box<SpacePresentation> },
    /// Quotient by a closed subspace.
    Quotient { of: Box<SpacePresentation> },
    /// Locally convex direct limit of a countable system.
    CountableDirectLimit { blocks: Vec<SpacePresentation> },
    /// Finitely supported real sequences with the finest locally convex
    /// topology (the countable direct sum of lines).
    FinSupp,
    /// Space flagged as a k_ω-space (countable ascending union of compacta).
    KOmega,
    /// Space flagged as a DF-space.
    Df,
    /// Space flagged as a gDF-space.
    Gdf,
    /// Bounded functions on a set larger than θ, topologized by the sup
    /// seminorms over subsets of cardinality at most θ.
    EllInftyTheta { theta: Cardinal },
    /// Finitely supported functions on a set of the given (uncountable)
    /// cardinality, with the topology initial with respect to restrictions
    /// to countable subsets.
    #[serde(rename_all = "camelCase")]
    RFinSuppUncountable { set_size: Cardinal },
}

impl SpacePresentation {
    pub fn subspace(of: SpacePresentation) -> Self {
        SpacePresentation::Subspace { of: Box::new(of) }
    }

    pub fn quotient(of: SpacePresentation) -> Self {
        SpacePresentation::Quotient { of: Box::new(of) }
    }

    pub fn direct_sum_uniform(index: Cardinal, block: SpacePresentation) -> Self {
        SpacePresentation::DirectSum {
            index,
            blocks: DirectSumBlocks::Uniform { block: Box::new(block) },
        }
    }

    pub fn direct_sum_of(blocks: Vec<SpacePresentation>) -> Self {
        let n = blocks.len() as u64;
        SpacePresentation::DirectSum {
            index: Cardinal::Finite(n),
            blocks: DirectSumBlocks::Listed { blocks },
        }
    }

    /// Structural well-formedness (index kinds, non-empty products).
    pub fn validate(&self) -> Result<(), SeminormError> {
        match self {
            SpacePresentation::DirectSum { index, blocks } => {
                if matches!(index, Cardinal::Continuum) {
                    return Err(SeminormError::InvalidPresentation(
                        "direct sum index must be finite or an aleph".into(),
                    ));
                }
                match blocks {
                    DirectSumBlocks::Uniform { block } => block.validate(),
                    DirectSumBlocks::Listed { blocks } => {
                        if let Cardinal::Finite(n) = index {
                            if *n != blocks.len() as u64 {
                                return Err(SeminormError::InvalidPresentation(
                                    "listed direct sum: index does not match block count".into(),
                                ));
                            }
                        }
                        blocks.iter().try_for_each(|b| b.validate())
                    }
                }
            }
            SpacePresentation::Product { blocks } => {
                if blocks.is_empty() {
                    return Err(SeminormError::InvalidPresentation(
                        "product needs at least one block".into(),
                    ));
                }
                blocks.iter().try_for_each(|b| b.validate())
            }
            SpacePresentation::Subspace { of } | SpacePresentation::Quotient { of } => of.validate(),
            SpacePresentation::CountableDirectLimit { blocks } => {
                blocks.iter().try_for_each(|b| b.validate())
            }
            _ => Ok(()),
        }
    }

    /// Short human-readable form used in derivation trees.
    pub fn describe(&self) -> String {
        match self {
            SpacePresentation::Normed => "Normed".into(),
            SpacePresentation::FrechetSeq { normable: true } => "FrechetSeq(normable)".into(),
            SpacePresentation::FrechetSeq { normable: false } => "FrechetSeq(non-normable)".into(),
            SpacePresentation::DirectSum { index, blocks } => match blocks {
                DirectSumBlocks::Uniform { block } => {
                    format!("⊕_{{{index}}} {}", block.describe())
                }
                DirectSumBlocks::Listed { blocks } => {
                    let inner: Vec<_> = blocks.iter().map(|b| b.describe()).collect();
                    format!("⊕({})", inner.join(", "))
                }
            },
            SpacePresentation::Product { blocks } => {
                let inner: Vec<_> = blocks.iter().map(|b| b.describe()).collect();
                format!("({})", inner.join(" × "))
            }
            SpacePresentation::Subspace { of } => format!("Subspace({})", of.describe()),
            SpacePresentation::Quotient { of } => format!("Quotient({})", of.describe()),
            SpacePresentation::CountableDirectLimit { blocks } => {
                let inner: Vec<_> = blocks.iter().map(|b| b.describe()).collect();
                format!("lim→({})", inner.join(", "))
            }
            SpacePresentation::FinSupp => "ℝ^(ℕ)".into(),
            SpacePresentation::KOmega => "kOmega".into(),
            SpacePresentation::Df => "DF".into(),
            SpacePresentation::Gdf => "gDF".into(),
            SpacePresentation::EllInftyTheta { theta } => format!("ℓ∞(X; θ={theta})"),
            SpacePresentation::RFinSuppUncountable { set_size } => {
                format!("ℝ^(M), |M|={set_size}")
            }
        }
    }
}

/// Symbolic seminorm on a presentation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "camelCase")]
pub enum SeminormExpr {
    /// Named base seminorm (e.g. the norm of a normed block).
    Base { id: String },
    /// Positive scalar multiple of an inner seminorm.
    Scale { factor: f64, inner: Box<SeminormExpr> },
    /// Pointwise maximum of finitely many seminorms on the same space.
    MaxOf { terms: Vec<SeminormExpr> },
    /// Weighted sum with strictly positive weights.
    SumOf { terms: Vec<(f64, SeminormExpr)> },
    /// Sup of the first `n` coordinates of a sequence.
    PrefixSup { n: u32 },
    /// Max of the sup norms of derivatives up to order `k`.
    CkNorm { k: u32 },
    /// `x ↦ max_m v(m)·|x_m|` for a weight map with countable support.
    WeightedSup {
        #[serde(with = "weight_map_serde")]
        weights: WeightMap,
    },
    /// Blockwise weighted sum on a direct sum (positive weights).
    BlockSum { terms: Vec<(f64, SeminormExpr)> },
    /// Blockwise maximum on a countable direct sum.
    BlockMax { terms: Vec<SeminormExpr> },
}

impl SeminormExpr {
    pub fn base(id: impl Into<String>) -> Self {
        SeminormExpr::Base { id: id.into() }
    }

    /// Scaling that collapses unit factors and nested scales.
    pub fn scale(factor: f64, inner: SeminormExpr) -> Self {
        assert!(factor > 0.0, "scale factor must be strictly positive");
        if factor == 1.0 {
            return inner;
        }
        match inner {
            SeminormExpr::Scale { factor: g, inner } => SeminormExpr::Scale {
                factor: factor * g,
                inner,
            },
            other => SeminormExpr::Scale {
                factor,
                inner: Box::new(other),
            },
        }
    }

    pub fn prefix_sup(n: u32) -> Self {
        SeminormExpr::PrefixSup { n }
    }

    pub fn ck_norm(k: u32) -> Self {
        SeminormExpr::CkNorm { k }
    }

    pub fn weighted_sup(weights: WeightMap) -> Self {
        SeminormExpr::WeightedSup { weights }
    }

    /// Checks positivity of scales and weights, and non-empty combinators.
    pub fn validate(&self) -> Result<(), SeminormError> {
        match self {
            SeminormExpr::Scale { factor, inner } => {
                if !factor.is_finite() || *factor <= 0.0 {
                    return Err(SeminormError::NonPositiveFactor(*factor));
                }
                inner.validate()
            }
            SeminormExpr::MaxOf { terms } | SeminormExpr::BlockMax { terms } => {
                if terms.is_empty() {
                    return Err(SeminormError::EmptyCombination);
                }
                terms.iter().try_for_each(|t| t.validate())
            }
            SeminormExpr::SumOf { terms } | SeminormExpr::BlockSum { terms } => {
                if terms.is_empty() {
                    return Err(SeminormError::EmptyCombination);
                }
                for (w, t) in terms {
                    if !w.is_finite() || *w <= 0.0 {
                        return Err(SeminormError::NonPositiveFactor(*w));
                    }
                    t.validate()?;
                }
                Ok(())
            }
            SeminormExpr::WeightedSup { weights } => {
                if weights.values().any(|w| *w < 0.0 || !w.is_finite()) {
                    return Err(SeminormError::NegativeWeight);
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SeminormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeminormExpr::Base { id } => write!(f, "{id}"),
            SeminormExpr::Scale { factor, inner } => write!(f, "{factor}·{inner}"),
            SeminormExpr::MaxOf { terms } => {
                let inner: Vec<_> = terms.iter().map(|t| t.to_string()).collect();
                write!(f, "max({})", inner.join(", "))
            }
            SeminormExpr::SumOf { terms } => {
                let inner: Vec<_> = terms.iter().map(|(w, t)| format!("{w}·{t}")).collect();
                write!(f, "({})", inner.join(" + "))
            }
            SeminormExpr::PrefixSup { n } => write!(f, "‖·‖_{n}"),
            SeminormExpr::CkNorm { k } => write!(f, "‖·‖_C^{k}"),
            SeminormExpr::WeightedSup { weights } => {
                write!(f, "wsup[{} pts]", weights.len())
            }
            SeminormExpr::BlockSum { terms } => write!(f, "blocksum[{}]", terms.len()),
            SeminormExpr::BlockMax { terms } => write!(f, "blockmax[{}]", terms.len()),
        }
    }
}

/// A seminorm together with the presentation it lives on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttachedSeminorm {
    pub space: SpacePresentation,
    pub expr: SeminormExpr,
}

impl AttachedSeminorm {
    pub fn new(space: SpacePresentation, expr: SeminormExpr) -> Self {
        AttachedSeminorm { space, expr }
    }
}

/// Certificate that `p ≤ constant · q` pointwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationCert {
    pub p: SeminormExpr,
    pub q: SeminormExpr,
    pub constant: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeminormError {
    #[error("seminorms are attached to different presentations")]
    MismatchedSpace,
    #[error("blockwise maximum needs a countable index, got {0}")]
    UncountableIndex(Cardinal),
    #[error("scale factors and weights must be strictly positive, got {0}")]
    NonPositiveFactor(f64),
    #[error("weighted sup needs finite nonnegative weights")]
    NegativeWeight,
    #[error("max/sum combinations need at least one term")]
    EmptyCombination,
    #[error("malformed presentation: {0}")]
    InvalidPresentation(String),
    #[error("per-block family must be non-empty")]
    EmptyFamily,
    #[error("weight list length {got} does not match family length {want}")]
    WeightLength { got: usize, want: usize },
}

/// Searches for a domination certificate `p ≤ C·q` on a shared presentation.
///
/// Returns the least constant the rewrite rules yield; `None` means no
/// certificate was found, not that none exists.
pub fn dominates(
    p: &AttachedSeminorm,
    q: &AttachedSeminorm,
) -> Result<Option<DominationCert>, SeminormError> {
    if p.space != q.space {
        return Err(SeminormError::MismatchedSpace);
    }
    Ok(dominates_expr(&p.expr, &q.expr))
}

/// Rule search on bare expressions (same-presentation case).
pub fn dominates_expr(p: &SeminormExpr, q: &SeminormExpr) -> Option<DominationCert> {
    best_constant(p, q).map(|constant| DominationCert {
        p: p.clone(),
        q: q.clone(),
        constant,
    })
}

/// All applicable rules are tried; the minimum constant wins. Recursion is
/// on strict subterms, so the search terminates.
fn best_constant(p: &SeminormExpr, q: &SeminormExpr) -> Option<f64> {
    let mut best: Option<f64> = None;
    let mut offer = |c: f64| {
        if best.is_none_or(|b| c < b) {
            best = Some(c);
        }
    };

    // Syntactic equality.
    if p == q {
        offer(1.0);
    }

    // Index monotonicity of the concrete families.
    match (p, q) {
        (SeminormExpr::PrefixSup { n }, SeminormExpr::PrefixSup { n: m }) if n <= m => offer(1.0),
        (SeminormExpr::CkNorm { k }, SeminormExpr::CkNorm { k: l }) if k <= l => offer(1.0),
        (SeminormExpr::WeightedSup { weights: v }, SeminormExpr::WeightedSup { weights: w }) => {
            if let Some(c) = weight_ratio_bound(v, w) {
                offer(c);
            }
        }
        _ => {}
    }

    // Scale on either side.
    if let SeminormExpr::Scale { factor, inner } = p {
        if let Some(c) = best_constant(inner, q) {
            offer(factor * c);
        }
    }
    if let SeminormExpr::Scale { factor, inner } = q {
        if let Some(c) = best_constant(p, inner) {
            offer(c / factor);
        }
    }

    // Combinators on the left.
    match p {
        SeminormExpr::MaxOf { terms } => {
            if let Some(c) = fold_all(terms.iter().map(|t| best_constant(t, q)), f64::max) {
                offer(c);
            }
        }
        SeminormExpr::SumOf { terms } => {
            let parts = terms.iter().map(|(w, t)| best_constant(t, q).map(|c| w * c));
            if let Some(c) = fold_all(parts, |a, b| a + b) {
                offer(c);
            }
        }
        _ => {}
    }

    // Combinators on the right: q dominates each of its own pieces.
    match q {
        SeminormExpr::MaxOf { terms } => {
            for t in terms {
                if let Some(c) = best_constant(p, t) {
                    offer(c);
                }
            }
        }
        SeminormExpr::SumOf { terms } => {
            for (w, t) in terms {
                if let Some(c) = best_constant(p, t) {
                    offer(c / w);
                }
            }
        }
        _ => {}
    }

    // Blockwise structures, compared block by block.
    match (p, q) {
        (SeminormExpr::BlockMax { terms: ps }, SeminormExpr::BlockMax { terms: qs })
            if ps.len() == qs.len() =>
        {
            let parts = ps.iter().zip(qs).map(|(a, b)| best_constant(a, b));
            if let Some(c) = fold_all(parts, f64::max) {
                offer(c);
            }
        }
        (SeminormExpr::BlockSum { terms: ps }, SeminormExpr::BlockSum { terms: qs })
            if ps.len() == qs.len() =>
        {
            // w_i·p_i ≤ (w_i·C_i/u_i)·u_i·q_i blockwise; the max ratio works globally.
            let parts = ps
                .iter()
                .zip(qs)
                .map(|((w, a), (u, b))| best_constant(a, b).map(|c| w * c / u));
            if let Some(c) = fold_all(parts, f64::max) {
                offer(c);
            }
        }
        (SeminormExpr::BlockMax { terms: ps }, SeminormExpr::BlockSum { terms: qs })
            if ps.len() == qs.len() =>
        {
            let parts = ps
                .iter()
                .zip(qs)
                .map(|(a, (u, b))| best_constant(a, b).map(|c| c / u));
            if let Some(c) = fold_all(parts, f64::max) {
                offer(c);
            }
        }
        (SeminormExpr::BlockSum { terms: ps }, SeminormExpr::BlockMax { terms: qs })
            if ps.len() == qs.len() =>
        {
            let parts = ps
                .iter()
                .zip(qs)
                .map(|((w, a), b)| best_constant(a, b).map(|c| w * c));
            if let Some(c) = fold_all(parts, |a, b| a + b) {
                offer(c);
            }
        }
        _ => {}
    }

    best
}

/// `max v(m)/w(m)` over the support of `v`, provided supp(v) ⊆ supp(w).
fn weight_ratio_bound(v: &WeightMap, w: &WeightMap) -> Option<f64> {
    let mut c: f64 = 0.0;
    for (m, &vm) in v {
        if vm == 0.0 {
            continue;
        }
        match w.get(m) {
            Some(&wm) if wm > 0.0 => c = c.max(vm / wm),
            _ => return None,
        }
    }
    Some(c.max(f64::MIN_POSITIVE))
}

fn fold_all(
    parts: impl Iterator<Item = Option<f64>>,
    combine: impl Fn(f64, f64) -> f64,
) -> Option<f64> {
    let mut acc: Option<f64> = None;
    for part in parts {
        let c = part?;
        acc = Some(match acc {
            None => c,
            Some(a) => combine(a, c),
        });
    }
    acc
}

/// Requested combination shape for [`upper_bound_direct_sum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CombineForm {
    /// Blockwise maximum; only available over countable index sets.
    Max,
    /// Blockwise weighted sum; available over arbitrary index sets.
    Sum,
}

/// Combines a per-block seminorm family into one seminorm on the direct sum
/// that dominates every block seminorm on its block.
///
/// The max form needs a countable index; the sum form takes optional strictly
/// positive weights (all ones when absent).
pub fn upper_bound_direct_sum(
    family: &[SeminormExpr],
    index: Cardinal,
    form: CombineForm,
    weights: Option<&[f64]>,
) -> Result<SeminormExpr, SeminormError> {
    if family.is_empty() {
        return Err(SeminormError::EmptyFamily);
    }
    match form {
        CombineForm::Max => {
            if !index.is_countable() {
                return Err(SeminormError::UncountableIndex(index));
            }
            Ok(SeminormExpr::BlockMax { terms: family.to_vec() })
        }
        CombineForm::Sum => {
            let terms: Vec<(f64, SeminormExpr)> = match weights {
                None => family.iter().map(|e| (1.0, e.clone())).collect(),
                Some(ws) => {
                    if ws.len() != family.len() {
                        return Err(SeminormError::WeightLength {
                            got: ws.len(),
                            want: family.len(),
                        });
                    }
                    if let Some(&w) = ws.iter().find(|w| !w.is_finite() || **w <= 0.0) {
                        return Err(SeminormError::NonPositiveFactor(w));
                    }
                    ws.iter().copied().zip(family.iter().cloned()).collect()
                }
            };
            Ok(SeminormExpr::BlockSum { terms })
        }
    }
}
