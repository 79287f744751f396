use std::f64::consts::PI;

use lightcone_kw::conformal::{ckv_fields, rotation_fields, ConformalMetric};
use lightcone_kw::seeded::random_scalar;
use lightcone_kw::{Error, SphereGrid, SymTensorField, VectorField};
use proptest::prelude::*;

fn d5(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

#[test]
fn constant_exponent_rescales_the_sphere() {
    let grid = SphereGrid::new(12).unwrap();
    let c = 0.4;
    let g = ConformalMetric::new(&grid, grid.field_from_nodes(|_| c));
    assert!((&g.gauss_curvature() - (-2.0 * c).exp()).max_abs() <= 1e-14);
    assert!((g.area() - 4.0 * PI * (2.0 * c).exp()).abs() <= 1e-12);
    assert_eq!(
        ConformalMetric::round(&grid).area(),
        grid.integrate(&grid.field_from_nodes(|_| 1.0))
    );
}

#[test]
fn gauss_bonnet_for_y20() {
    let grid = SphereGrid::new(32).unwrap();
    let g = ConformalMetric::new(&grid, grid.ylm(2, 0).unwrap().scale(0.1));
    assert!((g.integrate(&g.gauss_curvature()) - 4.0 * PI).abs() <= 1e-10);
}

#[test]
fn coordinate_gradients() {
    let grid = SphereGrid::new(16).unwrap();
    let grads = ckv_fields(&grid);
    let x: Vec<_> = (0..3).map(|i| grid.coordinate(i)).collect();
    let round = ConformalMetric::round(&grid);
    for i in 0..3 {
        for j in 0..3 {
            let lhs = &round.inner_vectors(&grads[i], &grads[j]) + &(&x[i] * &x[j]);
            let delta = if i == j { 1.0 } else { 0.0 };
            assert!((&lhs - delta).max_abs() <= 1e-12);
        }
        let div = round.div_vector(&grads[i]);
        assert!((&div + &x[i].scale(2.0)).max_abs() <= 1e-10);
    }
    // On the equator ∇x₃ = -∂_θ.
    for idx in 0..grid.n_nodes() {
        let (theta, _) = grid.node(idx);
        let expect = -theta.sin();
        assert!((grads[2].x1.values()[idx] - expect).abs() <= 1e-14);
        assert!(grads[2].x2.values()[idx].abs() <= 1e-14);
    }
}

#[test]
fn deformation_scalar_of_grad_x3() {
    let grid = SphereGrid::new(16).unwrap();
    let round = ConformalMetric::round(&grid);
    let x = &ckv_fields(&grid)[2];
    let omega = round.deformation_scalar(x).unwrap();
    // Oracle: Ω = div ∇x₃ = (1/sin θ) ∂_θ (sin θ · ∂_θ cos θ), by finite differences.
    let oracle = |t: f64| d5(|s: f64| s.sin() * d5(f64::cos, s, 1e-3), t, 1e-3) / t.sin();
    for idx in 0..grid.n_nodes() {
        let (theta, _) = grid.node(idx);
        assert!((omega.values()[idx] + 2.0 * theta.cos()).abs() <= 1e-12);
        assert!((omega.values()[idx] - oracle(theta)).abs() <= 1e-7);
    }
    let doubled = round.deformation_scalar(&x.scale(2.0)).unwrap();
    assert!((&doubled - &omega.scale(2.0)).max_abs() <= 1e-14);
    for r in rotation_fields(&grid) {
        assert!(round.deformation_scalar(&r).unwrap().max_abs() <= 1e-12);
    }
}

#[test]
fn non_conformal_field_is_detected() {
    let grid = SphereGrid::new(24).unwrap();
    let x3 = grid.coordinate(2);
    let x = grid.grad(&(&x3 * &x3)).sharp();
    let g = ConformalMetric::new(&grid, random_scalar(&grid, 1, 4, 0.3));
    assert!(g.conformal_killing_residual(&x).max_abs() > 0.1);
    assert!(matches!(
        g.deformation_scalar(&x),
        Err(Error::NotConformalKilling { .. })
    ));
}

#[test]
fn round_curvature_is_exactly_one() {
    let grid = SphereGrid::new(20).unwrap();
    let k = ConformalMetric::new(&grid, grid.field_from_nodes(|_| 0.0)).gauss_curvature();
    assert!(k.values().iter().all(|&v| v == 1.0));
}

fn seeded_metric(grid: &SphereGrid, seed: u64) -> ConformalMetric<'_> {
    ConformalMetric::new(grid, random_scalar(grid, seed, 8, 1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn gauss_bonnet(seed in 0u64..10_000) {
        let grid = SphereGrid::new(48).unwrap();
        let g = seeded_metric(&grid, seed);
        prop_assert!((g.integrate(&g.gauss_curvature()) - 4.0 * PI).abs() <= 1e-9);
    }

    #[test]
    fn coordinate_gradients_stay_conformal_killing(seed in 0u64..10_000) {
        let grid = SphereGrid::new(48).unwrap();
        let g = seeded_metric(&grid, seed);
        for x in ckv_fields(&grid) {
            prop_assert!(g.conformal_killing_defect(&x) <= 1e-9);
            // L_X g = Ω g, with Ω the deformation scalar.
            let omega = g.deformation_scalar(&x).unwrap();
            let expect = SymTensorField::metric(&(&omega * g.density()));
            let gap = g.deformation_tensor(&x).sub(&expect);
            prop_assert!(g.inner_tensors(&gap, &gap).map(f64::sqrt).max_abs() <= 1e-9);
        }
    }

    #[test]
    fn raised_gradient_pairs_like_the_round_one(seed in 0u64..10_000) {
        let grid = SphereGrid::new(24).unwrap();
        let g = ConformalMetric::new(&grid, random_scalar(&grid, seed, 4, 0.7));
        let k = g.gauss_curvature();
        let round = ConformalMetric::round(&grid);
        let x: VectorField = ckv_fields(&grid)[(seed % 3) as usize].clone();
        let lhs = g.inner_vectors(&g.grad(&k), &x);
        let rhs = round.inner_vectors(&round.grad(&k), &x);
        let scale = rhs.max_abs().max(1.0);
        prop_assert!((&lhs - &rhs).max_abs() <= 1e-12 * scale);
    }
}
