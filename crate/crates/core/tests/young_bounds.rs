//! Convolution norm bounds on the group models: exact on the cyclic
//! group with counting measure, within discretization slack on the circle.

use prodest_core::models::{convolve, rl_norm, support_mass, GridFunction, GroupFunction, GroupModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[test]
fn cyclic_sup_bound_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let m = rng.gen_range(1..=16);
        let model = GroupModel::CyclicZ { order: m };
        let sparse = |rng: &mut ChaCha8Rng| {
            let mut v = vec![0.0; m];
            for slot in v.iter_mut() {
                if rng.gen_bool(0.6) {
                    *slot = rng.gen_range(-2.0..2.0);
                }
            }
            GroupFunction::Discrete(v)
        };
        let gamma = sparse(&mut rng);
        let eta = sparse(&mut rng);
        let conv = convolve(&model, &gamma, &eta).unwrap();
        let lhs = conv.sup_norm();
        let rhs = gamma.sup_norm() * eta.sup_norm() * support_mass(&model, &gamma).unwrap();
        assert!(lhs <= rhs, "‖γ*η‖ = {lhs} > {rhs}");
    }
}

#[test]
fn truncated_window_sup_bound_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..200 {
        let radius = rng.gen_range(2..=8);
        let model = GroupModel::TruncatedZ { radius };
        // Keep the mass near the origin so the product support fits.
        let draw = |rng: &mut ChaCha8Rng| {
            let mut v = vec![0.0; 2 * radius + 1];
            for offset in 0..=(radius / 2) {
                v[radius + offset] = rng.gen_range(-2.0..2.0);
                v[radius - offset] = rng.gen_range(-2.0..2.0);
            }
            GroupFunction::Discrete(v)
        };
        let gamma = draw(&mut rng);
        let eta = draw(&mut rng);
        let conv = convolve(&model, &gamma, &eta).unwrap();
        let rhs = gamma.sup_norm() * eta.sup_norm() * support_mass(&model, &gamma).unwrap();
        assert!(conv.sup_norm() <= rhs);
    }
}

fn random_trig(n: usize, degree: usize, rng: &mut ChaCha8Rng) -> GridFunction {
    let coeffs: Vec<(f64, f64)> = (0..=degree)
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    GridFunction::sample_circle(n, |x| {
        coeffs
            .iter()
            .enumerate()
            .map(|(d, (a, b))| {
                let arg = 2.0 * PI * d as f64 * x;
                a * arg.cos() + b * arg.sin()
            })
            .sum()
    })
    .unwrap()
}

#[test]
fn circle_mixed_derivative_bound() {
    let n = 512;
    let model = GroupModel::CircleGrid { points: n };
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..50 {
        let gamma = GroupFunction::Grid(random_trig(n, 4, &mut rng));
        let eta = GroupFunction::Grid(random_trig(n, 4, &mut rng));
        let conv = convolve(&model, &gamma, &eta).unwrap();
        for k in 0..=2u32 {
            for l in 0..=2u32 {
                let lhs = rl_norm(&model, &conv, k, l).unwrap();
                let rhs = rl_norm(&model, &gamma, k, 0).unwrap()
                    * rl_norm(&model, &eta, 0, l).unwrap(); // λ(G) = 1
                assert!(
                    lhs <= rhs * (1.0 + 1e-6),
                    "k={k}, l={l}: {lhs} > {rhs}"
                );
            }
        }
    }
}
