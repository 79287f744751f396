use lightcone_kw::lightcone::{
    cone_surface, embed, extrinsic_package, frame_defects, gauss_codazzi_residuals, null_frame,
    second_fundamental_form, AmbientVectorField,
};
use lightcone_kw::seeded::random_scalar;
use lightcone_kw::sphere::real_ylm;
use lightcone_kw::{ScalarField, SphereGrid};
use nalgebra::{Matrix4, Vector4};
use proptest::prelude::*;

fn at(v: &AmbientVectorField, idx: usize) -> [f64; 4] {
    std::array::from_fn(|mu| v.components[mu].values()[idx])
}

fn eta(a: [f64; 4], b: [f64; 4]) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

fn d5(f: impl Fn(f64) -> [f64; 4], x: f64, h: f64) -> [f64; 4] {
    let (a, b, c, d) = (f(x + 2.0 * h), f(x + h), f(x - h), f(x - 2.0 * h));
    std::array::from_fn(|i| (-a[i] + 8.0 * b[i] - 8.0 * c[i] + d[i]) / (12.0 * h))
}

fn unit(theta: f64, phi: f64) -> [f64; 3] {
    [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ]
}

fn h_closed(theta: f64, phi: f64) -> f64 {
    0.2 * real_ylm(2, 1, theta, phi) - 0.1 * real_ylm(3, -2, theta, phi)
}

fn cone_point(theta: f64, phi: f64) -> [f64; 4] {
    let (e, n) = (h_closed(theta, phi).exp(), unit(theta, phi));
    [e, e * n[0], e * n[1], e * n[2]]
}

fn generator(theta: f64, phi: f64) -> [f64; 4] {
    let n = unit(theta, phi);
    [1.0, n[0], n[1], n[2]]
}

fn seeded_h(grid: &SphereGrid, seed: u64) -> ScalarField {
    random_scalar(grid, seed, 4, 0.3)
}

#[test]
fn graph_of_y21_has_conformal_induced_metric() {
    let grid = SphereGrid::new(32).unwrap();
    let h = grid.ylm(2, 1).unwrap().scale(0.2);
    let s = embed(&grid, &h);
    assert!(s.induced_metric_error() <= 1e-10);
    assert!(s.cone_defect() <= 1e-13);
    s.assert_spacelike().unwrap();
}

#[test]
fn constant_exponent_is_a_dilation() {
    let grid = SphereGrid::new(12).unwrap();
    let c = -0.4;
    let (s, e) = cone_surface(&grid, &grid.field_from_nodes(|_| c)).unwrap();
    let m = s.induced_metric();
    assert!((&m.t11 - (2.0 * c).exp()).max_abs() <= 1e-13);
    assert!((&m.t22 - (2.0 * c).exp()).max_abs() <= 1e-13);
    assert!((&e.trchi - 2.0 * (-c).exp()).max_abs() <= 1e-12);
    assert!((&e.trchibar + 2.0 * (-c).exp()).max_abs() <= 1e-12);
}

#[test]
fn unit_sphere_partner_is_du() {
    let grid = SphereGrid::new(10).unwrap();
    let s = embed(&grid, &grid.field_from_nodes(|_| 0.0));
    let f = null_frame(&s).unwrap();
    for idx in 0..grid.n_nodes() {
        let n = grid.frame(idx).normal;
        let lb = at(&f.lbar, idx);
        assert!((lb[0] - 1.0).abs() <= 1e-14);
        for i in 0..3 {
            assert!((lb[i + 1] + n[i]).abs() <= 1e-14);
        }
    }
}

#[test]
fn partner_matches_generic_linear_solve() {
    let grid = SphereGrid::new(24).unwrap();
    let h = grid.coordinate(2).scale(0.3);
    let s = embed(&grid, &h);
    let f = null_frame(&s).unwrap();
    let lower = |v: [f64; 4]| [-v[0], v[1], v[2], v[3]];
    for idx in 0..grid.n_nodes() {
        let l = at(&f.l, idx);
        let n = grid.frame(idx).normal;
        let rows = [
            lower(at(s.tangent(0), idx)),
            lower(at(s.tangent(1), idx)),
            lower(l),
            lower([1.0, -n[0], -n[1], -n[2]]),
        ];
        let m = Matrix4::from_fn(|r, c| rows[r][c]);
        let x0 = m.lu().solve(&Vector4::new(0.0, 0.0, -2.0, 0.0)).unwrap();
        let x0 = [x0[0], x0[1], x0[2], x0[3]];
        // Shift along L to make the solution null; the other rows are unaffected.
        let t = eta(x0, x0) / 4.0;
        let oracle: [f64; 4] = std::array::from_fn(|i| x0[i] + t * l[i]);
        let got = at(&f.lbar, idx);
        assert!(oracle[0] > 0.0);
        for i in 0..4 {
            assert!(
                (got[i] - oracle[i]).abs() <= 1e-12,
                "node {idx}: {got:?} vs {oracle:?}"
            );
        }
    }
}

#[test]
fn chi_matches_finite_difference_ambient_oracle() {
    let grid = SphereGrid::new(32).unwrap();
    let h = grid.field_from_fn(h_closed);
    let (_, e) = cone_surface(&grid, &h).unwrap();
    let step = 1e-3;
    let mut worst: f64 = 0.0;
    for idx in (0..grid.n_nodes()).step_by(7) {
        let (theta, phi) = grid.node(idx);
        let sin = theta.sin();
        let tangents = [
            d5(|t| cone_point(t, phi), theta, step),
            d5(|p| cone_point(theta, p), phi, step).map(|v| v / sin),
        ];
        let dl = [
            d5(|t| generator(t, phi), theta, step),
            d5(|p| generator(theta, p), phi, step).map(|v| v / sin),
        ];
        for (a, dla) in dl.iter().enumerate() {
            for (b, tb) in tangents.iter().enumerate() {
                let oracle = eta(*dla, *tb);
                let got = e.chi.component(a, b).values()[idx];
                worst = worst.max((got - oracle).abs());
            }
        }
    }
    assert!(worst <= 1e-8, "worst {worst}");
}

#[test]
fn chi_is_symmetric_before_symmetrization() {
    let grid = SphereGrid::new(32).unwrap();
    let h = seeded_h(&grid, 11);
    let s = embed(&grid, &h);
    let f = null_frame(&s).unwrap();
    for v in [&f.l, &f.lbar] {
        let t = second_fundamental_form(&s, v);
        assert!((&t.t12 - &t.t21).max_abs() <= 1e-10);
    }
}

#[test]
fn round_sphere_package() {
    let grid = SphereGrid::new(16).unwrap();
    let (_, e) = cone_surface(&grid, &grid.field_from_nodes(|_| 0.0)).unwrap();
    assert!((&e.trchi - 2.0).max_abs() <= 1e-12);
    assert!((&e.trchibar + 2.0).max_abs() <= 1e-12);
    assert!(e.zeta.max_norm() <= 1e-12);
    assert!(e.chihat.max_abs() <= 1e-12 && e.chibarhat.max_abs() <= 1e-12);
    assert!(gauss_codazzi_residuals(&e).max() <= 1e-12);
}

#[test]
fn trchibar_agrees_with_gauss_inversion() {
    let grid = SphereGrid::new(32).unwrap();
    let h = grid.ylm(2, 0).unwrap().scale(0.2);
    let (_, e) = cone_surface(&grid, &h).unwrap();
    // With χ̂ = 0 the first Gauss equation gives trχ̄ = -4K / trχ.
    let k = e.metric.gauss_curvature();
    let inverted = k.zip_map(&e.trchi, |k, t| -4.0 * k / t);
    let closed = h.zip_map(&grid.laplacian(&h), |h, l| -2.0 * (-h).exp() * (1.0 - l));
    assert!((&e.trchibar - &inverted).max_abs() <= 1e-8);
    assert!((&e.trchibar - &closed).max_abs() <= 1e-8);
}

#[test]
fn y20_residuals_at_l32() {
    let grid = SphereGrid::new(32).unwrap();
    let h = grid.ylm(2, 0).unwrap().scale(0.2);
    let (_, e) = cone_surface(&grid, &h).unwrap();
    let r = gauss_codazzi_residuals(&e).max_norms();
    assert!(r.iter().all(|&v| v <= 1e-8), "{r:?}");
}

fn residuals(band: usize, seed: u64) -> [f64; 4] {
    let grid = SphereGrid::new(band).unwrap();
    let (_, e) = cone_surface(&grid, &seeded_h(&grid, seed)).unwrap();
    gauss_codazzi_residuals(&e).max_norms()
}

#[test]
fn residuals_decay_spectrally() {
    for seed in [1, 2, 3] {
        let (coarse, fine) = (residuals(24, seed), residuals(48, seed));
        for k in 0..4 {
            // Residuals that are exact up to round-off already sit at the floor.
            let ok = fine[k] <= coarse[k] / 10.0 || coarse[k].max(fine[k]) <= 1e-11;
            assert!(ok, "seed {seed} residual {k}: {} -> {}", coarse[k], fine[k]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn seeded_surfaces_satisfy_all_structure_equations(seed in 0u64..1000) {
        let grid = SphereGrid::new(32).unwrap();
        let h = seeded_h(&grid, seed);
        let s = embed(&grid, &h);
        prop_assert!(s.induced_metric_error() <= 1e-10);
        prop_assert!(s.cone_defect() <= 1e-13);
        let f = null_frame(&s).unwrap();
        prop_assert!(frame_defects(&s, &f).max() <= 1e-12);
        prop_assert!(f.l.components[0].min() > 0.0 && f.lbar.components[0].min() > 0.0);
        let e = extrinsic_package(&s, &f);
        prop_assert!(e.chihat.max_abs() <= 1e-10);
        prop_assert!(e.chihat.max_trace() <= 1e-12 && e.chibarhat.max_trace() <= 1e-12);
        let expected = h.map(|v| 2.0 * (-v).exp());
        prop_assert!((&e.trchi - &expected).max_abs() <= 1e-9);
        prop_assert!(e.zeta.sub(&grid.grad(&h)).max_norm() <= 1e-9);
        let r = gauss_codazzi_residuals(&e).max_norms();
        prop_assert!(r.iter().all(|&v| v <= 1e-8), "{:?}", r);
    }
}

#[test]
fn closed_form_frame_derivatives_match_spectral_ones() {
    let grid = SphereGrid::new(48).unwrap();
    let h = seeded_h(&grid, 21);
    let s = embed(&grid, &h);
    let f = null_frame(&s).unwrap();
    let exact = f.derivatives.clone().expect("closed form");
    let spectral = [
        f.l.frame_derivatives(&grid),
        f.lbar.frame_derivatives(&grid),
    ];
    for v in 0..2 {
        for a in 0..2 {
            assert!(exact[v][a].sub(&spectral[v][a]).max_abs() <= 1e-10);
        }
    }
}
