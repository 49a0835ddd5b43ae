//! Grid functions on [0,1] or the circle, finite-difference derivatives,
//! and the scaled bump family.
//!
//! Derivatives use second-order central differences, with second-order
//! one-sided stencils at interval endpoints; the j-th derivative is j
//! applications of the first-derivative stencil. Refining the grid must
//! shrink the error by roughly a factor of four (order two), which the
//! tests check against closed forms.

use super::ModelError;
use serde::{Deserialize, Serialize};

/// Samples of a real function on a uniform grid over \[0,1\] (endpoints
/// included) or over the circle of circumference 1 (endpoint excluded).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridFunctionRepr")]
pub struct GridFunction {
    samples: Vec<f64>,
    spacing: f64,
    periodic: bool,
}

/// Raw wire form; the spacing must cover [0,1] or the circle exactly.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFunctionRepr {
    samples: Vec<f64>,
    spacing: f64,
    periodic: bool,
}

impl TryFrom<GridFunctionRepr> for GridFunction {
    type Error = String;

    fn try_from(raw: GridFunctionRepr) -> Result<Self, Self::Error> {
        let intervals = if raw.periodic {
            raw.samples.len()
        } else {
            raw.samples.len().saturating_sub(1)
        };
        if intervals == 0 || (raw.spacing * intervals as f64 - 1.0).abs() > 1e-9 {
            return Err(format!(
                "grid spacing {} does not cover the unit {} with {} samples",
                raw.spacing,
                if raw.periodic { "circle" } else { "interval" },
                raw.samples.len()
            ));
        }
        Ok(GridFunction {
            samples: raw.samples,
            spacing: raw.spacing,
            periodic: raw.periodic,
        })
    }
}

impl GridFunction {
    pub fn on_interval(samples: Vec<f64>) -> Result<Self, ModelError> {
        if samples.len() < 2 {
            return Err(ModelError::ShapeMismatch(
                "interval grid needs at least two samples".into(),
            ));
        }
        let spacing = 1.0 / (samples.len() as f64 - 1.0);
        Ok(GridFunction { samples, spacing, periodic: false })
    }

    pub fn on_circle(samples: Vec<f64>) -> Result<Self, ModelError> {
        if samples.is_empty() {
            return Err(ModelError::ShapeMismatch("circle grid needs samples".into()));
        }
        let spacing = 1.0 / samples.len() as f64;
        Ok(GridFunction { samples, spacing, periodic: true })
    }

    /// Samples `f` at `points` uniform nodes of \[0,1\], endpoints included.
    pub fn sample_interval(points: usize, f: impl Fn(f64) -> f64) -> Result<Self, ModelError> {
        if points < 2 {
            return Err(ModelError::ShapeMismatch(
                "interval grid needs at least two samples".into(),
            ));
        }
        let h = 1.0 / (points as f64 - 1.0);
        GridFunction::on_interval((0..points).map(|i| f(i as f64 * h)).collect())
    }

    /// Samples `f` at `points` uniform nodes of the circle, x_i = i/points.
    pub fn sample_circle(points: usize, f: impl Fn(f64) -> f64) -> Result<Self, ModelError> {
        let h = 1.0 / points as f64;
        GridFunction::on_circle((0..points).map(|i| f(i as f64 * h)).collect())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn periodic(&self) -> bool {
        self.periodic
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn pointwise_mul(&self, other: &GridFunction) -> Result<GridFunction, ModelError> {
        if self.samples.len() != other.samples.len() || self.periodic != other.periodic {
            return Err(ModelError::ShapeMismatch(format!(
                "grids of {} and {} samples",
                self.samples.len(),
                other.samples.len()
            )));
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a * b)
            .collect();
        Ok(GridFunction { samples, spacing: self.spacing, periodic: self.periodic })
    }

    /// First derivative by second-order finite differences.
    pub fn derivative(&self) -> Result<GridFunction, ModelError> {
        let n = self.samples.len();
        if n < 3 {
            return Err(ModelError::StencilTooWide { k: 1, needed: 3, got: n });
        }
        let h = self.spacing;
        let s = &self.samples;
        let mut out = vec![0.0; n];
        if self.periodic {
            for i in 0..n {
                let prev = s[(i + n - 1) % n];
                let next = s[(i + 1) % n];
                out[i] = (next - prev) / (2.0 * h);
            }
        } else {
            out[0] = (-3.0 * s[0] + 4.0 * s[1] - s[2]) / (2.0 * h);
            for i in 1..n - 1 {
                out[i] = (s[i + 1] - s[i - 1]) / (2.0 * h);
            }
            out[n - 1] = (3.0 * s[n - 1] - 4.0 * s[n - 2] + s[n - 3]) / (2.0 * h);
        }
        Ok(GridFunction { samples: out, spacing: h, periodic: self.periodic })
    }

    /// Second derivative by the three-point stencil, one-sided four-point
    /// stencils at interval endpoints.
    pub fn second_derivative(&self) -> Result<GridFunction, ModelError> {
        let n = self.samples.len();
        let needed = if self.periodic { 3 } else { 4 };
        if n < needed {
            return Err(ModelError::StencilTooWide { k: 2, needed, got: n });
        }
        let h2 = self.spacing * self.spacing;
        let s = &self.samples;
        let mut out = vec![0.0; n];
        if self.periodic {
            for i in 0..n {
                let prev = s[(i + n - 1) % n];
                let next = s[(i + 1) % n];
                out[i] = (next - 2.0 * s[i] + prev) / h2;
            }
        } else {
            out[0] = (2.0 * s[0] - 5.0 * s[1] + 4.0 * s[2] - s[3]) / h2;
            for i in 1..n - 1 {
                out[i] = (s[i + 1] - 2.0 * s[i] + s[i - 1]) / h2;
            }
            out[n - 1] = (2.0 * s[n - 1] - 5.0 * s[n - 2] + 4.0 * s[n - 3] - s[n - 4]) / h2;
        }
        Ok(GridFunction { samples: out, spacing: self.spacing, periodic: self.periodic })
    }
}

/// `max_{j ≤ k} ‖f^{(j)}‖_∞` with finite-difference derivatives.
///
/// The j-th derivative is the canonical order-2 composition: ⌊j/2⌋
/// second-derivative stencils, then one first-derivative stencil for odd j.
pub fn ck_norm(f: &GridFunction, k: u32) -> Result<f64, ModelError> {
    let needed = 2 * k as usize + 1;
    if f.len() < needed {
        return Err(ModelError::StencilTooWide { k, needed, got: f.len() });
    }
    let mut even = f.clone();
    let mut best = even.sup_norm();
    for j in 1..=k {
        let value = if j % 2 == 0 {
            even = even.second_derivative()?;
            even.sup_norm()
        } else {
            even.derivative()?.sup_norm()
        };
        best = best.max(value);
    }
    Ok(best)
}

/// The reference bump: supported in [-1/4, 1/4], positive at 0.
pub fn base_bump(u: f64) -> f64 {
    let v = 4.0 * u;
    if v.abs() < 1.0 {
        (-1.0 / (1.0 - v * v)).exp()
    } else {
        0.0
    }
}

/// Samples `g_t(x) = t^k · g((x − 1/2)/t)` on \[0,1\] with `intervals + 1`
/// nodes, where `g` is [`base_bump`]. For t ≤ 1 the support stays inside
/// [1/2 − t/4, 1/2 + t/4].
pub fn bump(t: f64, k: u32, intervals: usize) -> Result<GridFunction, ModelError> {
    if !t.is_finite() || t <= 0.0 {
        return Err(ModelError::NonPositiveT(t));
    }
    let scale = t.powi(k as i32);
    GridFunction::sample_interval(intervals + 1, |x| scale * base_bump((x - 0.5) / t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_function_has_unit_ck_norms() {
        let f = GridFunction::sample_interval(101, |_| 1.0).unwrap();
        for k in 0..=3 {
            let v = ck_norm(&f, k).unwrap();
            assert!((v - 1.0).abs() < 1e-10, "k={k}: {v}");
        }
    }

    #[test]
    fn linear_function_c1_norm() {
        let f = GridFunction::sample_interval(101, |x| x).unwrap();
        let v = ck_norm(&f, 1).unwrap();
        assert!((v - 1.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn sine_first_derivative_on_circle() {
        let f = GridFunction::sample_circle(1024, |x| (2.0 * PI * x).sin()).unwrap();
        let v = ck_norm(&f, 1).unwrap();
        assert!((v - 2.0 * PI).abs() / (2.0 * PI) < 1e-3, "{v}");
    }

    #[test]
    fn ck_norm_monotone_in_k() {
        let f = GridFunction::sample_circle(512, |x| (2.0 * PI * x).sin() + 0.3).unwrap();
        let mut last = 0.0;
        for k in 0..=3 {
            let v = ck_norm(&f, k).unwrap();
            assert!(v >= last - 1e-12);
            last = v;
        }
    }

    // Refining the grid must shrink the derivative error by ~4 (order 2).
    #[test]
    fn derivative_converges_at_order_two() {
        let exact = 2.0 * PI;
        let err = |n: usize| {
            let f = GridFunction::sample_circle(n, |x| (2.0 * PI * x).sin()).unwrap();
            (ck_norm(&f, 1).unwrap() - exact).abs()
        };
        let coarse = err(256);
        let fine = err(512);
        let ratio = coarse / fine;
        assert!((3.5..4.5).contains(&ratio), "convergence ratio {ratio}");
    }

    #[test]
    fn one_sided_stencils_converge_too() {
        // x³ has nonzero curvature at the endpoints; derivative sup is 3.
        let err = |n: usize| {
            let f = GridFunction::sample_interval(n, |x| x * x * x).unwrap();
            (ck_norm(&f, 1).unwrap() - 3.0).abs()
        };
        let ratio = err(129) / err(257);
        assert!((3.0..5.0).contains(&ratio), "convergence ratio {ratio}");
    }

    #[test]
    fn stencil_width_guard() {
        let f = GridFunction::sample_interval(4, |x| x).unwrap();
        assert!(matches!(
            ck_norm(&f, 2),
            Err(ModelError::StencilTooWide { .. })
        ));
    }

    #[test]
    fn bump_value_and_support() {
        let g = bump(1.0, 0, 4096).unwrap();
        let mid = g.samples()[2048];
        assert!((mid - (-1.0f64).exp()).abs() < 1e-12, "{mid}");
        assert_eq!(g.samples()[0], 0.0);

        for &t in &[1.0, 0.5, 0.125] {
            let g = bump(t, 2, 8192).unwrap();
            let h = g.spacing();
            for (i, &v) in g.samples().iter().enumerate() {
                let x = i as f64 * h;
                if v != 0.0 {
                    assert!(
                        (x - 0.5).abs() <= t / 4.0 + 1e-12,
                        "support escapes: t={t}, x={x}"
                    );
                }
            }
        }

        assert!(matches!(bump(0.0, 0, 16), Err(ModelError::NonPositiveT(_))));
    }
}
