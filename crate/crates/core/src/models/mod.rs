//! Finite, numerically evaluable models of spaces, seminorms, and bilinear
//! maps. Everything here is a truncation or a discretization; the symbolic
//! modules certify, these models check.

mod bilinear;
mod grid;
mod group;

pub use bilinear::{spot_check_bilinear, BilinearModel, SpaceModel};
pub use grid::{base_bump, bump, ck_norm, GridFunction};
pub use group::{convolve, haar_mass, rl_norm, support_mass, GroupFunction, GroupModel};

use crate::seminorm::{SeminormExpr, WeightMap};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("prefix index {index} exceeds truncation {truncation}")]
    IndexBeyondTruncation { index: usize, truncation: usize },
    #[error("order-{k} stencil needs at least {needed} samples, got {got}")]
    StencilTooWide { k: u32, needed: usize, got: usize },
    #[error("bump scale parameter must be strictly positive, got {0}")]
    NonPositiveT(f64),
    #[error("convolution mass at position {position} falls outside the window ±{radius}")]
    OverflowOutsideWindow { position: i64, radius: usize },
    #[error("group model has no differential structure: {0}")]
    UnsupportedGroupModel(String),
    #[error("seminorm not evaluable on this model: {0}")]
    Unevaluable(String),
    #[error("map is not bilinear on the model: {0}")]
    NotBilinear(String),
}

/// A truncation of a real sequence; coordinates beyond the truncation are
/// implicitly zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeqVector {
    entries: Vec<f64>,
}

impl SeqVector {
    pub fn new(entries: Vec<f64>) -> Self {
        SeqVector { entries }
    }

    pub fn zeros(truncation: usize) -> Self {
        SeqVector { entries: vec![0.0; truncation] }
    }

    /// The standard basis vector with a single 1 at `index` (zero-based).
    pub fn basis(truncation: usize, index: usize) -> Self {
        let mut entries = vec![0.0; truncation];
        entries[index] = 1.0;
        SeqVector { entries }
    }

    pub fn truncation(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [f64] {
        &mut self.entries
    }
}

/// `max{|x_1|, …, |x_n|}` (the first `n` coordinates).
pub fn prefix_norm(x: &SeqVector, n: u32) -> Result<f64, ModelError> {
    let n = n as usize;
    if n > x.entries.len() {
        return Err(ModelError::IndexBeyondTruncation {
            index: n,
            truncation: x.entries.len(),
        });
    }
    Ok(x.entries[..n].iter().fold(0.0, |m, v| m.max(v.abs())))
}

/// `max_m v(m)·|x_m|`; coordinates beyond the truncation are zero.
pub fn weighted_sup_norm(x: &SeqVector, weights: &WeightMap) -> f64 {
    let mut best = 0.0f64;
    for (&m, &w) in weights {
        let xm = x.entries.get(m as usize).copied().unwrap_or(0.0);
        best = best.max(w * xm.abs());
    }
    best
}

/// Entrywise product of two vectors or grid functions of matching shape.
pub fn pointwise_mul(x: &ModelVector, y: &ModelVector) -> Result<ModelVector, ModelError> {
    match (x, y) {
        (ModelVector::Seq(a), ModelVector::Seq(b)) => {
            if a.truncation() != b.truncation() {
                return Err(ModelError::ShapeMismatch(format!(
                    "truncations {} vs {}",
                    a.truncation(),
                    b.truncation()
                )));
            }
            let entries = a
                .entries()
                .iter()
                .zip(b.entries())
                .map(|(u, v)| u * v)
                .collect();
            Ok(ModelVector::Seq(SeqVector::new(entries)))
        }
        (ModelVector::Grid(a), ModelVector::Grid(b)) => Ok(ModelVector::Grid(a.pointwise_mul(b)?)),
        _ => Err(ModelError::ShapeMismatch(
            "pointwise product needs two vectors of the same kind".into(),
        )),
    }
}

/// A concrete point of a model space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "camelCase")]
pub enum ModelVector {
    Seq(SeqVector),
    Grid(GridFunction),
    Blocks { blocks: Vec<ModelVector> },
}

impl ModelVector {
    pub fn seq(entries: Vec<f64>) -> Self {
        ModelVector::Seq(SeqVector::new(entries))
    }
}

/// Evaluates a symbolic seminorm at a model point.
///
/// Prefix sups past the truncation are clamped to the truncation: the missing
/// coordinates of the modelled vector are zero, so the clamped value is the
/// true one.
pub fn eval_seminorm(expr: &SeminormExpr, v: &ModelVector) -> Result<f64, ModelError> {
    match (expr, v) {
        (SeminormExpr::Scale { factor, inner }, _) => Ok(factor * eval_seminorm(inner, v)?),
        (SeminormExpr::MaxOf { terms }, _) => {
            let mut best = 0.0f64;
            for t in terms {
                best = best.max(eval_seminorm(t, v)?);
            }
            Ok(best)
        }
        (SeminormExpr::SumOf { terms }, _) => {
            let mut sum = 0.0;
            for (w, t) in terms {
                sum += w * eval_seminorm(t, v)?;
            }
            Ok(sum)
        }
        (SeminormExpr::PrefixSup { n }, ModelVector::Seq(x)) => {
            let n = (*n as usize).min(x.truncation());
            prefix_norm(x, n as u32)
        }
        (SeminormExpr::WeightedSup { weights }, ModelVector::Seq(x)) => {
            Ok(weighted_sup_norm(x, weights))
        }
        (SeminormExpr::CkNorm { k }, ModelVector::Grid(f)) => ck_norm(f, *k),
        (SeminormExpr::BlockSum { terms }, ModelVector::Blocks { blocks }) => {
            if terms.len() != blocks.len() {
                return Err(ModelError::ShapeMismatch(format!(
                    "block seminorm over {} blocks applied to {} blocks",
                    terms.len(),
                    blocks.len()
                )));
            }
            let mut sum = 0.0;
            for ((w, t), b) in terms.iter().zip(blocks) {
                sum += w * eval_seminorm(t, b)?;
            }
            Ok(sum)
        }
        (SeminormExpr::BlockMax { terms }, ModelVector::Blocks { blocks }) => {
            if terms.len() != blocks.len() {
                return Err(ModelError::ShapeMismatch(format!(
                    "block seminorm over {} blocks applied to {} blocks",
                    terms.len(),
                    blocks.len()
                )));
            }
            let mut best = 0.0f64;
            for (t, b) in terms.iter().zip(blocks) {
                best = best.max(eval_seminorm(t, b)?);
            }
            Ok(best)
        }
        (expr, _) => Err(ModelError::Unevaluable(format!(
            "{expr} on this vector kind"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_norm_on_basis_vectors() {
        let e3 = SeqVector::basis(5, 2); // 1 at position 3, one-based
        assert_eq!(prefix_norm(&e3, 2), Ok(0.0));
        assert_eq!(prefix_norm(&e3, 3), Ok(1.0));
        let zero = SeqVector::zeros(5);
        for n in 0..=5 {
            assert_eq!(prefix_norm(&zero, n), Ok(0.0));
        }
        assert!(matches!(
            prefix_norm(&e3, 6),
            Err(ModelError::IndexBeyondTruncation { .. })
        ));
    }

    #[test]
    fn prefix_norm_monotone_in_n() {
        let x = SeqVector::new(vec![0.5, -2.0, 1.0, -3.5]);
        let mut last = 0.0;
        for n in 1..=4 {
            let v = prefix_norm(&x, n).unwrap();
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn weighted_sup_examples() {
        let e2 = SeqVector::basis(3, 1);
        let v: WeightMap = [(1u64, 1.0)].into_iter().collect();
        assert_eq!(weighted_sup_norm(&e2, &v), 1.0);

        let x = SeqVector::new(vec![1.0, 5.0, 2.0]);
        let v: WeightMap = [(0u64, 3.0), (2u64, 1.0)].into_iter().collect();
        assert_eq!(weighted_sup_norm(&x, &v), 3.0);

        assert_eq!(weighted_sup_norm(&x, &WeightMap::new()), 0.0);
    }

    #[test]
    fn pointwise_mul_examples() {
        let e2 = ModelVector::Seq(SeqVector::basis(4, 1));
        let e3 = ModelVector::Seq(SeqVector::basis(4, 2));
        let zero = ModelVector::Seq(SeqVector::zeros(4));

        assert_eq!(pointwise_mul(&e2, &zero).unwrap(), zero);
        assert_eq!(pointwise_mul(&e2, &e3).unwrap(), zero);
        assert_eq!(pointwise_mul(&e3, &e3).unwrap(), e3);

        let short = ModelVector::Seq(SeqVector::zeros(3));
        assert!(pointwise_mul(&e2, &short).is_err());
    }

    #[test]
    fn seminorm_evaluation_matches_direct_norms() {
        let x = ModelVector::seq(vec![1.0, -4.0, 0.5]);
        assert_eq!(
            eval_seminorm(&SeminormExpr::prefix_sup(2), &x).unwrap(),
            4.0
        );
        // Clamped past the truncation: missing coordinates are zero.
        assert_eq!(
            eval_seminorm(&SeminormExpr::prefix_sup(99), &x).unwrap(),
            4.0
        );
        let scaled = SeminormExpr::scale(2.0, SeminormExpr::prefix_sup(1));
        assert_eq!(eval_seminorm(&scaled, &x).unwrap(), 2.0);

        let combo = SeminormExpr::MaxOf {
            terms: vec![SeminormExpr::prefix_sup(1), SeminormExpr::prefix_sup(3)],
        };
        assert_eq!(eval_seminorm(&combo, &x).unwrap(), 4.0);

        assert!(eval_seminorm(&SeminormExpr::ck_norm(1), &x).is_err());
    }

    #[test]
    fn block_seminorms_need_matching_block_counts() {
        let v = ModelVector::Blocks {
            blocks: vec![ModelVector::seq(vec![1.0, 2.0]), ModelVector::seq(vec![3.0, 0.0])],
        };
        let bm = SeminormExpr::BlockMax {
            terms: vec![SeminormExpr::prefix_sup(2), SeminormExpr::prefix_sup(2)],
        };
        assert_eq!(eval_seminorm(&bm, &v).unwrap(), 3.0);

        let bs = SeminormExpr::BlockSum {
            terms: vec![(2.0, SeminormExpr::prefix_sup(2)), (1.0, SeminormExpr::prefix_sup(2))],
        };
        assert_eq!(eval_seminorm(&bs, &v).unwrap(), 7.0);

        let wrong = SeminormExpr::BlockMax { terms: vec![SeminormExpr::prefix_sup(2)] };
        assert!(eval_seminorm(&wrong, &v).is_err());
    }
}
