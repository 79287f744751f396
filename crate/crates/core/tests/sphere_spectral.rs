use std::f64::consts::PI;

use lightcone_kw::seeded::{random_covector, random_scalar};
use lightcone_kw::sphere::real_ylm;
use lightcone_kw::{CovectorField, Error, SphereGrid, SymTensorField};
use proptest::prelude::*;

/// Adaptive Simpson on `[a, b]`.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Fourth-order central difference.
fn d5(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

#[test]
fn total_area_is_four_pi() {
    let grid = SphereGrid::new(4).unwrap();
    let one = grid.field_from_nodes(|_| 1.0);
    assert!((grid.integrate(&one) - 4.0 * PI).abs() / (4.0 * PI) <= 1e-13);
}

#[test]
fn y10_integrates_to_zero() {
    let grid = SphereGrid::new(16).unwrap();
    let y = grid.ylm(1, 0).unwrap();
    assert!(grid.integrate(&y).abs() <= 1e-13);
}

#[test]
fn x3_squared_matches_adaptive_quadrature() {
    // ∫∫ cos²θ sinθ dθ dφ, evaluated independently of the grid.
    let oracle = 2.0 * PI * adaptive_simpson(&|t: f64| t.cos().powi(2) * t.sin(), 0.0, PI, 1e-15);
    assert!((oracle - 4.0 * PI / 3.0).abs() < 1e-12);
    let grid = SphereGrid::new(16).unwrap();
    let x3 = grid.coordinate(2);
    let got = grid.integrate(&(&x3 * &x3));
    assert!((got - oracle).abs() <= 1e-12, "{got} vs {oracle}");
}

#[test]
fn y20_5_is_normalized() {
    let grid = SphereGrid::new(32).unwrap();
    let y = grid.ylm(20, 5).unwrap();
    assert!((grid.integrate(&(&y * &y)) - 1.0).abs() <= 1e-12);
}

#[test]
fn quadrature_orthonormality_through_l_minus_one() {
    let grid = SphereGrid::new(12).unwrap();
    let lmax = grid.band_limit() - 1;
    for l in 0..=lmax {
        for m in -(l as i64)..=(l as i64) {
            let c = grid.analyze(&grid.ylm(l, m).unwrap());
            for (l2, m2, v) in c.iter() {
                let expect = if (l2, m2) == (l, m) { 1.0 } else { 0.0 };
                assert!((v - expect).abs() <= 1e-12, "({l},{m}) vs ({l2},{m2}): {v}");
            }
        }
    }
}

#[test]
fn analysis_of_single_harmonic_and_zero() {
    let grid = SphereGrid::new(16).unwrap();
    let c = grid.analyze(&grid.ylm(3, -2).unwrap());
    for (l, m, v) in c.iter() {
        let expect = if (l, m) == (3, -2) { 1.0 } else { 0.0 };
        assert!((v - expect).abs() < 1e-13);
    }
    let z = grid.analyze(&grid.field_from_nodes(|_| 0.0));
    assert_eq!(z.max_abs(), 0.0);
}

#[test]
fn synthesize_rejects_out_of_band_tables() {
    let grid = SphereGrid::new(8).unwrap();
    let c = lightcone_kw::SphCoeffs::zeros(9);
    assert!(matches!(grid.synthesize(&c), Err(Error::OutOfBand { .. })));
    let mut c = lightcone_kw::SphCoeffs::zeros(8);
    assert!(c.set(9, 0, 1.0).is_err());
    assert!(c.set(3, 4, 1.0).is_err());
}

#[test]
fn grad_of_x3_and_constant() {
    let grid = SphereGrid::new(16).unwrap();
    let g = grid.grad(&grid.coordinate(2));
    for idx in 0..grid.n_nodes() {
        let (t, _) = grid.node(idx);
        assert!((g.c1.values()[idx] + t.sin()).abs() < 1e-13);
        assert!(g.c2.values()[idx].abs() < 1e-13);
    }
    let gc = grid.grad(&grid.field_from_nodes(|_| 2.5)).max_norm();
    assert!(gc < 1e-12, "{gc}");
}

#[test]
fn grad_of_y53_matches_finite_differences() {
    let grid = SphereGrid::new(20).unwrap();
    let g = grid.grad(&grid.ylm(5, 3).unwrap());
    let h = 1e-3;
    let mut worst: f64 = 0.0;
    for idx in 0..grid.n_nodes() {
        let (t, p) = grid.node(idx);
        let dt = d5(|s| real_ylm(5, 3, s, p), t, h);
        let dp = d5(|s| real_ylm(5, 3, t, s), p, h) / t.sin();
        worst = worst
            .max((g.c1.values()[idx] - dt).abs())
            .max((g.c2.values()[idx] - dp).abs());
    }
    assert!(worst <= 1e-8, "{worst}");
}

#[test]
fn laplacian_eigenvalue_y7_m4() {
    let grid = SphereGrid::new(32).unwrap();
    let y = grid.ylm(7, -4).unwrap();
    let lap = grid.laplacian(&y);
    let err = (&lap + &y.scale(56.0)).max_abs() / (56.0 * y.max_abs());
    assert!(err <= 1e-10, "{err}");
}

#[test]
fn div_grad_x3_is_minus_two_cos_theta() {
    let grid = SphereGrid::new(16).unwrap();
    let d = grid.div(&grid.grad(&grid.coordinate(2)));
    // Finite-difference cross-check of div ω = (1/sinθ) ∂_θ(sinθ ω₁) with ω₁ = -sinθ.
    let fd = |t: f64| d5(|s| s.sin() * -s.sin(), t, 1e-3) / t.sin();
    for idx in 0..grid.n_nodes() {
        let (t, _) = grid.node(idx);
        assert!((d.values()[idx] + 2.0 * t.cos()).abs() < 1e-12);
        assert!((fd(t) + 2.0 * t.cos()).abs() < 1e-9);
    }
}

#[test]
fn div_sym_of_metric_and_zero_vanish() {
    let grid = SphereGrid::new(16).unwrap();
    let one = grid.field_from_nodes(|_| 1.0);
    assert!(grid.div_sym(&SymTensorField::metric(&one)).max_norm() < 1e-13);
    let zero = grid.field_from_nodes(|_| 0.0);
    assert_eq!(grid.div_sym(&SymTensorField::metric(&zero)).max_norm(), 0.0);
}

#[test]
fn div_sym_of_hessian_matches_cot_theta_finite_differences() {
    // T = sym(∇ω), ω = grad Y₂₁; Y₂₁ = c sinθ cosθ cosφ.
    let c = (15.0 / (4.0 * PI)).sqrt();
    let tensor = |t: f64, p: f64| {
        let f_t = c * (2.0 * t).cos() * p.cos();
        let f_tt = -2.0 * c * (2.0 * t).sin() * p.cos();
        let f_p = -0.5 * c * (2.0 * t).sin() * p.sin();
        let f_pp = -0.5 * c * (2.0 * t).sin() * p.cos();
        let f_tp = -c * (2.0 * t).cos() * p.sin();
        let h11 = f_tt;
        let h12 = f_tp / t.sin() - t.cos() / t.sin().powi(2) * f_p;
        let h22 = f_pp / t.sin().powi(2) + t.cos() / t.sin() * f_t;
        [2.0 * h11, 2.0 * h12, 2.0 * h22]
    };
    let grid = SphereGrid::new(24).unwrap();
    let y = grid.ylm(2, 1).unwrap();
    let t_num = grid.covariant_derivative(&grid.grad(&y)).sym();
    let div = grid.div_sym(&t_num);
    let h = 1e-3;
    let mut worst: f64 = 0.0;
    for idx in 0..grid.n_nodes() {
        let (t, p) = grid.node(idx);
        let [t11, t12, t22] = tensor(t, p);
        let cot = t.cos() / t.sin();
        let d1 = d5(|s| tensor(s, p)[0], t, h)
            + cot * (t11 - t22)
            + d5(|s| tensor(t, s)[1], p, h) / t.sin();
        let d2 = d5(|s| tensor(s, p)[1], t, h)
            + 2.0 * cot * t12
            + d5(|s| tensor(t, s)[2], p, h) / t.sin();
        worst = worst
            .max((div.c1.values()[idx] - d1).abs())
            .max((div.c2.values()[idx] - d2).abs());
    }
    assert!(worst <= 1e-8, "{worst}");
    // Ricci identity on the unit sphere: div Hess f = d(Δf) + df = -5 df for l = 2.
    let expect = grid.grad(&y).scale(-10.0);
    assert!(div.sub(&expect).max_norm() < 1e-10);
}

#[test]
fn poisson_examples() {
    let grid = SphereGrid::new(16).unwrap();
    let y10 = grid.ylm(1, 0).unwrap();
    let u = grid.poisson_solve(&y10.scale(-2.0)).unwrap();
    assert!((&u - &y10).max_abs() < 1e-13);
    let z = grid.poisson_solve(&grid.field_from_nodes(|_| 0.0)).unwrap();
    assert_eq!(z.max_abs(), 0.0);
    let err = grid
        .poisson_solve(&grid.field_from_nodes(|_| 1.0))
        .unwrap_err();
    assert!(matches!(err, Error::Incompatible { .. }));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn round_trip_and_parseval(seed in 0u64..10_000, amp in 0.1f64..2.0) {
        let grid = SphereGrid::new(24).unwrap();
        let f = random_scalar(&grid, seed, 24, amp);
        let c = grid.analyze(&f);
        let back = grid.synthesize(&c).unwrap();
        prop_assert!((&back - &f).max_abs() <= 1e-12 * f.max_abs());
        let energy = grid.integrate(&(&f * &f));
        prop_assert!((c.energy() - energy).abs() <= 1e-12 * energy);
    }

    #[test]
    fn integration_by_parts(seed in 0u64..10_000) {
        let grid = SphereGrid::new(32).unwrap();
        let f = random_scalar(&grid, seed, 8, 1.0);
        let w = random_covector(&grid, seed + 1, 8, 1.0);
        let lhs = grid.integrate(&(&f * &grid.div(&w)));
        let rhs = -grid.integrate(&grid.grad(&f).dot(&w));
        prop_assert!((lhs - rhs).abs() <= 1e-10, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn curl_grad_and_total_curl_vanish(seed in 0u64..10_000) {
        let grid = SphereGrid::new(32).unwrap();
        let f = random_scalar(&grid, seed, 8, 1.0);
        prop_assert!(grid.curl(&grid.grad(&f)).max_abs() <= 1e-10);
        let w: CovectorField = random_covector(&grid, seed, 8, 1.0);
        prop_assert!(grid.integrate(&grid.curl(&w)).abs() <= 1e-10);
    }

    #[test]
    fn poisson_inverts_laplacian(seed in 0u64..10_000, offset in -2.0f64..2.0) {
        let grid = SphereGrid::new(32).unwrap();
        let u0 = &random_scalar(&grid, seed, 8, 1.0) + offset;
        let u = grid.poisson_solve(&grid.laplacian(&u0)).unwrap();
        let mean = grid.integrate(&u0) / (4.0 * PI);
        prop_assert!((&u - &(&u0 - mean)).max_abs() <= 1e-11);
    }

    #[test]
    fn laplacian_is_div_grad(seed in 0u64..10_000) {
        let grid = SphereGrid::new(32).unwrap();
        let f = random_scalar(&grid, seed, 8, 1.0);
        prop_assert!((&grid.laplacian(&f) - &grid.div(&grid.grad(&f))).max_abs() <= 1e-10);
    }
}

#[test]
fn eigenstructure_up_to_half_band() {
    let grid = SphereGrid::new(32).unwrap();
    for l in 0..=16usize {
        for m in -(l as i64)..=(l as i64) {
            let y = grid.ylm(l, m).unwrap();
            let ev = (l * (l + 1)) as f64;
            let err = (&grid.laplacian(&y) + &y.scale(ev)).max_abs() / (ev.max(1.0) * y.max_abs());
            assert!(err <= 1e-10, "l={l} m={m}: {err}");
        }
    }
}
