//! Desk-scale group models and convolution.
//!
//! Three abelian models: the cyclic group ℤ/m with counting measure, a
//! truncated window of ℤ (no wraparound — escaping mass is an error), and
//! a uniform grid on the circle with normalized measure λ(G) = 1.

use super::{GridFunction, ModelError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "group", rename_all = "camelCase")]
pub enum GroupModel {
    /// ℤ/order with counting measure.
    CyclicZ { order: usize },
    /// The window {−radius, …, radius} of ℤ with counting measure.
    TruncatedZ { radius: usize },
    /// The circle sampled at `points` uniform nodes, total measure 1.
    CircleGrid { points: usize },
}

/// A function on a group model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupFunction {
    Discrete(Vec<f64>),
    Grid(GridFunction),
}

impl GroupFunction {
    pub fn sup_norm(&self) -> f64 {
        match self {
            GroupFunction::Discrete(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            GroupFunction::Grid(g) => g.sup_norm(),
        }
    }
}

/// Total Haar mass of the model (|G| for discrete models, 1 for the circle).
pub fn haar_mass(model: &GroupModel) -> f64 {
    match model {
        GroupModel::CyclicZ { order } => *order as f64,
        GroupModel::TruncatedZ { radius } => (2 * radius + 1) as f64,
        GroupModel::CircleGrid { .. } => 1.0,
    }
}

/// Haar mass of the support of `f` (number of nonzero points for discrete
/// models, measure of the nonzero nodes for the circle).
pub fn support_mass(model: &GroupModel, f: &GroupFunction) -> Result<f64, ModelError> {
    match (model, f) {
        (GroupModel::CyclicZ { .. } | GroupModel::TruncatedZ { .. }, GroupFunction::Discrete(v)) => {
            Ok(v.iter().filter(|x| **x != 0.0).count() as f64)
        }
        (GroupModel::CircleGrid { points }, GroupFunction::Grid(g)) => {
            let nonzero = g.samples().iter().filter(|x| **x != 0.0).count();
            Ok(nonzero as f64 / *points as f64)
        }
        _ => Err(ModelError::ShapeMismatch(
            "function kind does not match the group model".into(),
        )),
    }
}

fn expect_discrete(
    f: &GroupFunction,
    len: usize,
) -> Result<&[f64], ModelError> {
    match f {
        GroupFunction::Discrete(v) if v.len() == len => Ok(v),
        GroupFunction::Discrete(v) => Err(ModelError::ShapeMismatch(format!(
            "expected {len} group points, got {}",
            v.len()
        ))),
        GroupFunction::Grid(_) => Err(ModelError::ShapeMismatch(
            "discrete group model needs a discrete function".into(),
        )),
    }
}

/// Convolution with respect to the model's Haar measure, with scalar
/// multiplication as the factor map:
/// `(γ*η)(x) = Σ_y γ(y)·η(x−y)·weight(y)`.
pub fn convolve(
    model: &GroupModel,
    gamma: &GroupFunction,
    eta: &GroupFunction,
) -> Result<GroupFunction, ModelError> {
    match model {
        GroupModel::CyclicZ { order } => {
            let m = *order;
            let a = expect_discrete(gamma, m)?;
            let b = expect_discrete(eta, m)?;
            let mut out = vec![0.0; m];
            for (x, slot) in out.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (y, ay) in a.iter().enumerate() {
                    acc += ay * b[(x + m - y) % m];
                }
                *slot = acc;
            }
            Ok(GroupFunction::Discrete(out))
        }
        GroupModel::TruncatedZ { radius } => {
            let r = *radius as i64;
            let len = (2 * radius + 1) as i64;
            let a = expect_discrete(gamma, len as usize)?;
            let b = expect_discrete(eta, len as usize)?;
            // Full convolution on ℤ, support within ±2r.
            let mut out = vec![0.0; 4 * radius + 1];
            for (i, ai) in a.iter().enumerate() {
                if *ai == 0.0 {
                    continue;
                }
                for (j, bj) in b.iter().enumerate() {
                    out[i + j] += ai * bj;
                }
            }
            // Window check: indices i+j correspond to points i+j−2r.
            let mut window = vec![0.0; len as usize];
            for (idx, &v) in out.iter().enumerate() {
                let point = idx as i64 - 2 * r;
                if point.abs() > r {
                    if v != 0.0 {
                        return Err(ModelError::OverflowOutsideWindow {
                            position: point,
                            radius: *radius,
                        });
                    }
                } else {
                    window[(point + r) as usize] = v;
                }
            }
            Ok(GroupFunction::Discrete(window))
        }
        GroupModel::CircleGrid { points } => {
            let n = *points;
            let (ga, gb) = match (gamma, eta) {
                (GroupFunction::Grid(a), GroupFunction::Grid(b)) => (a, b),
                _ => {
                    return Err(ModelError::ShapeMismatch(
                        "circle model needs grid functions".into(),
                    ))
                }
            };
            if !ga.periodic() || !gb.periodic() || ga.len() != n || gb.len() != n {
                return Err(ModelError::ShapeMismatch(format!(
                    "circle model needs periodic grids of {n} samples"
                )));
            }
            let a = ga.samples();
            let b = gb.samples();
            let weight = 1.0 / n as f64;
            let mut out = vec![0.0; n];
            for (x, slot) in out.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (y, ay) in a.iter().enumerate() {
                    acc += ay * b[(x + n - y) % n];
                }
                *slot = acc * weight;
            }
            Ok(GroupFunction::Grid(GridFunction::on_circle(out)?))
        }
    }
}

/// The mixed derivative seminorm `max ‖X_i…X_1.Y_j…Y_1.f‖_∞` over i ≤ k,
/// j ≤ ℓ. On abelian models left- and right-invariant fields coincide, so
/// this is the max of `‖f^{(d)}‖_∞` for d ≤ k+ℓ, computed by iterating the
/// first-derivative operator — invariant-field derivatives are iterated
/// first-order operators, and iterating one fixed stencil keeps the
/// discrete convolution estimates exact. Only k = ℓ = 0 (the plain sup
/// norm) makes sense on models without differential structure.
pub fn rl_norm(
    model: &GroupModel,
    f: &GroupFunction,
    k: u32,
    l: u32,
) -> Result<f64, ModelError> {
    if k + l == 0 {
        return Ok(f.sup_norm());
    }
    match (model, f) {
        (GroupModel::CircleGrid { points }, GroupFunction::Grid(g)) => {
            if !g.periodic() || g.len() != *points {
                return Err(ModelError::ShapeMismatch(format!(
                    "circle model needs a periodic grid of {points} samples"
                )));
            }
            let mut current = g.clone();
            let mut best = current.sup_norm();
            for _ in 0..(k + l) {
                current = current.derivative()?;
                best = best.max(current.sup_norm());
            }
            Ok(best)
        }
        (GroupModel::CircleGrid { .. }, _) => Err(ModelError::ShapeMismatch(
            "circle model needs a grid function".into(),
        )),
        (other, _) => Err(ModelError::UnsupportedGroupModel(format!(
            "{other:?} has no invariant vector fields to differentiate along"
        ))),
    }
}
