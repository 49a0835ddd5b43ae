//! Evaluable bilinear maps between model spaces.

use super::{pointwise_mul, GridFunction, ModelError, ModelVector, SeqVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Shape of a model space, used for sampling and validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "camelCase")]
pub enum SpaceModel {
    Seq { truncation: usize },
    Grid { points: usize, periodic: bool },
    Blocks { blocks: Vec<SpaceModel> },
}

impl SpaceModel {
    pub fn zero(&self) -> ModelVector {
        match self {
            SpaceModel::Seq { truncation } => ModelVector::Seq(SeqVector::zeros(*truncation)),
            SpaceModel::Grid { points, periodic } => {
                let samples = vec![0.0; *points];
                let g = if *periodic {
                    GridFunction::on_circle(samples)
                } else {
                    GridFunction::on_interval(samples)
                };
                ModelVector::Grid(g.expect("zero grid"))
            }
            SpaceModel::Blocks { blocks } => ModelVector::Blocks {
                blocks: blocks.iter().map(|b| b.zero()).collect(),
            },
        }
    }

    /// Number of real coordinates (grid nodes count as coordinates).
    pub fn dimension(&self) -> usize {
        match self {
            SpaceModel::Seq { truncation } => *truncation,
            SpaceModel::Grid { points, .. } => *points,
            SpaceModel::Blocks { blocks } => blocks.iter().map(|b| b.dimension()).sum(),
        }
    }
}

type EvalFn = Box<dyn Fn(&ModelVector, &ModelVector) -> Result<ModelVector, ModelError> + Send + Sync>;

/// A bilinear map between model spaces, evaluable at concrete points.
pub struct BilinearModel {
    pub name: String,
    pub left: SpaceModel,
    pub right: SpaceModel,
    pub output: SpaceModel,
    eval: EvalFn,
}

impl std::fmt::Debug for BilinearModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BilinearModel")
            .field("name", &self.name)
            .field("left", &self.left)
            .field("right", &self.right)
            .field("output", &self.output)
            .finish()
    }
}

impl BilinearModel {
    pub fn eval(&self, x: &ModelVector, y: &ModelVector) -> Result<ModelVector, ModelError> {
        (self.eval)(x, y)
    }

    /// Pointwise multiplication on a truncated sequence space.
    pub fn pointwise_seq(truncation: usize) -> Self {
        BilinearModel {
            name: format!("pointwise-seq-{truncation}"),
            left: SpaceModel::Seq { truncation },
            right: SpaceModel::Seq { truncation },
            output: SpaceModel::Seq { truncation },
            eval: Box::new(pointwise_mul),
        }
    }

    /// Pointwise multiplication scaled by a constant factor.
    pub fn scaled_pointwise_seq(truncation: usize, factor: f64) -> Self {
        BilinearModel {
            name: format!("scaled-pointwise-seq-{truncation}"),
            left: SpaceModel::Seq { truncation },
            right: SpaceModel::Seq { truncation },
            output: SpaceModel::Seq { truncation },
            eval: Box::new(move |x, y| {
                let mut out = pointwise_mul(x, y)?;
                if let ModelVector::Seq(s) = &mut out {
                    for v in s.entries_mut() {
                        *v *= factor;
                    }
                }
                Ok(out)
            }),
        }
    }

    /// Pointwise multiplication of grid functions.
    pub fn pointwise_grid(points: usize, periodic: bool) -> Self {
        BilinearModel {
            name: format!("pointwise-grid-{points}"),
            left: SpaceModel::Grid { points, periodic },
            right: SpaceModel::Grid { points, periodic },
            output: SpaceModel::Grid { points, periodic },
            eval: Box::new(pointwise_mul),
        }
    }

    /// Block map `((x_i), (y_j)) ↦ Σ_{i,j} scale[i][j]·(x_i ⊙ y_j)` from a
    /// pair of block sequence spaces into one truncated sequence space.
    pub fn scaled_block_pointwise(
        blocks: usize,
        truncation: usize,
        scales: Vec<Vec<f64>>,
    ) -> Result<Self, ModelError> {
        if scales.len() != blocks || scales.iter().any(|r| r.len() != blocks) {
            return Err(ModelError::ShapeMismatch(format!(
                "scale table must be {blocks}×{blocks}"
            )));
        }
        let block_space = SpaceModel::Blocks {
            blocks: vec![SpaceModel::Seq { truncation }; blocks],
        };
        let eval = move |x: &ModelVector, y: &ModelVector| -> Result<ModelVector, ModelError> {
            let (xs, ys) = match (x, y) {
                (ModelVector::Blocks { blocks: xs }, ModelVector::Blocks { blocks: ys })
                    if xs.len() == blocks && ys.len() == blocks =>
                {
                    (xs, ys)
                }
                _ => {
                    return Err(ModelError::ShapeMismatch(format!(
                        "expected two {blocks}-block vectors"
                    )))
                }
            };
            let mut out = SeqVector::zeros(truncation);
            for (i, xi) in xs.iter().enumerate() {
                for (j, yj) in ys.iter().enumerate() {
                    let prod = pointwise_mul(xi, yj)?;
                    let p = match prod {
                        ModelVector::Seq(p) => p,
                        _ => unreachable!("block entries are sequences"),
                    };
                    let c = scales[i][j];
                    for (slot, v) in out.entries_mut().iter_mut().zip(p.entries()) {
                        *slot += c * v;
                    }
                }
            }
            Ok(ModelVector::Seq(out))
        };
        Ok(BilinearModel {
            name: format!("block-pointwise-{blocks}x{truncation}"),
            left: block_space.clone(),
            right: block_space,
            output: SpaceModel::Seq { truncation },
            eval: Box::new(eval),
        })
    }

    /// The zero bilinear map.
    pub fn zero_map(left: SpaceModel, right: SpaceModel, output: SpaceModel) -> Self {
        let out = output.clone();
        BilinearModel {
            name: "zero".into(),
            left,
            right,
            output,
            eval: Box::new(move |_, _| Ok(out.zero())),
        }
    }
}

fn max_abs(v: &ModelVector) -> f64 {
    match v {
        ModelVector::Seq(s) => s.entries().iter().fold(0.0, |m, x| m.max(x.abs())),
        ModelVector::Grid(g) => g.sup_norm(),
        ModelVector::Blocks { blocks } => blocks.iter().fold(0.0, |m, b| m.max(max_abs(b))),
    }
}

fn linear_combine(a: &ModelVector, ca: f64, b: &ModelVector, cb: f64) -> ModelVector {
    match (a, b) {
        (ModelVector::Seq(x), ModelVector::Seq(y)) => {
            let entries = x
                .entries()
                .iter()
                .zip(y.entries())
                .map(|(u, v)| ca * u + cb * v)
                .collect();
            ModelVector::Seq(SeqVector::new(entries))
        }
        (ModelVector::Grid(x), ModelVector::Grid(y)) => {
            let mut g = x.clone();
            for (slot, v) in g.samples_mut().iter_mut().zip(y.samples()) {
                *slot = ca * *slot + cb * v;
            }
            ModelVector::Grid(g)
        }
        (ModelVector::Blocks { blocks: xs }, ModelVector::Blocks { blocks: ys }) => {
            ModelVector::Blocks {
                blocks: xs
                    .iter()
                    .zip(ys)
                    .map(|(u, v)| linear_combine(u, ca, v, cb))
                    .collect(),
            }
        }
        _ => panic!("mismatched vector kinds in linear combination"),
    }
}

fn random_point(space: &SpaceModel, rng: &mut impl Rng) -> ModelVector {
    match space {
        SpaceModel::Seq { truncation } => ModelVector::Seq(SeqVector::new(
            (0..*truncation).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        )),
        SpaceModel::Grid { points, periodic } => {
            let samples: Vec<f64> = (0..*points).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let g = if *periodic {
                GridFunction::on_circle(samples)
            } else {
                GridFunction::on_interval(samples)
            };
            ModelVector::Grid(g.expect("random grid"))
        }
        SpaceModel::Blocks { blocks } => ModelVector::Blocks {
            blocks: blocks.iter().map(|b| random_point(b, rng)).collect(),
        },
    }
}

/// Checks additivity and homogeneity of the map on random triples, within
/// 1e-12 relative error.
pub fn spot_check_bilinear(
    model: &BilinearModel,
    triples: usize,
    rng: &mut impl Rng,
) -> Result<(), ModelError> {
    for _ in 0..triples {
        let x = random_point(&model.left, rng);
        let x2 = random_point(&model.left, rng);
        let y = random_point(&model.right, rng);
        let c: f64 = rng.gen_range(-2.0..2.0);

        let bxy = model.eval(&x, &y)?;
        let bx2y = model.eval(&x2, &y)?;
        let additive = model.eval(&linear_combine(&x, 1.0, &x2, 1.0), &y)?;
        let sum = linear_combine(&bxy, 1.0, &bx2y, 1.0);
        let scale = max_abs(&sum).max(1.0);
        let add_err = max_abs(&linear_combine(&additive, 1.0, &sum, -1.0)) / scale;
        if add_err > 1e-12 {
            return Err(ModelError::NotBilinear(format!(
                "additivity error {add_err:.3e} on {}",
                model.name
            )));
        }

        let homog = model.eval(&linear_combine(&x, c, &x, 0.0), &y)?;
        let scaled = linear_combine(&bxy, c, &bxy, 0.0);
        let scale = max_abs(&scaled).max(1.0);
        let hom_err = max_abs(&linear_combine(&homog, 1.0, &scaled, -1.0)) / scale;
        if hom_err > 1e-12 {
            return Err(ModelError::NotBilinear(format!(
                "homogeneity error {hom_err:.3e} on {}",
                model.name
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn registered_models_are_bilinear() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let models = vec![
            BilinearModel::pointwise_seq(16),
            BilinearModel::pointwise_grid(64, true),
            BilinearModel::pointwise_grid(65, false),
            BilinearModel::scaled_block_pointwise(
                2,
                8,
                vec![vec![1.0, 2.0], vec![0.5, 4.0]],
            )
            .unwrap(),
            BilinearModel::zero_map(
                SpaceModel::Seq { truncation: 4 },
                SpaceModel::Seq { truncation: 4 },
                SpaceModel::Seq { truncation: 4 },
            ),
        ];
        for m in &models {
            spot_check_bilinear(m, 100, &mut rng).unwrap();
        }
    }

    #[test]
    fn prefix_bound_for_pointwise_multiplication() {
        // ‖x·y‖_n ≤ ‖x‖_n·‖y‖_n on the sequence model.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let model = BilinearModel::pointwise_seq(12);
        for _ in 0..200 {
            let x = random_point(&model.left, &mut rng);
            let y = random_point(&model.right, &mut rng);
            let b = model.eval(&x, &y).unwrap();
            for n in 1..=12u32 {
                let pn = |v: &ModelVector| match v {
                    ModelVector::Seq(s) => super::super::prefix_norm(s, n).unwrap(),
                    _ => unreachable!(),
                };
                assert!(pn(&b) <= pn(&x) * pn(&y) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn leibniz_bound_for_grid_multiplication() {
        // ‖γ·η‖_{C^k} ≤ 2^k·‖γ‖_{C^k}·‖η‖_{C^k} within discretization slack.
        use std::f64::consts::PI;
        let n = 1024;
        let model = BilinearModel::pointwise_grid(n, true);
        let f = GridFunction::sample_circle(n, |x| (2.0 * PI * x).sin() + 0.2).unwrap();
        let g = GridFunction::sample_circle(n, |x| (4.0 * PI * x).cos()).unwrap();
        let prod = model
            .eval(&ModelVector::Grid(f.clone()), &ModelVector::Grid(g.clone()))
            .unwrap();
        let prod = match prod {
            ModelVector::Grid(p) => p,
            _ => unreachable!(),
        };
        for k in 0..=2u32 {
            let lhs = super::super::ck_norm(&prod, k).unwrap();
            let rhs = 2f64.powi(k as i32)
                * super::super::ck_norm(&f, k).unwrap()
                * super::super::ck_norm(&g, k).unwrap();
            assert!(lhs <= rhs * (1.0 + 1e-3), "k={k}: {lhs} vs {rhs}");
        }
    }
}
