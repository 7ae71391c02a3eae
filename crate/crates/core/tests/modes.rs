use std::f64::consts::PI;

use fisher_modes::modes::{
    beta_for_sigma, default_ball, kg_alpha_sq, make_free_mode_in_ball, make_kg_mode, make_localized_mode,
    make_shell_mode, mean_r_sq, multiplier_fields, oscillator_eigenvalue, pde_residual, LocalizationConstraint,
    ModeFunction, ModeSpec,
};
use fisher_modes::quadrature::GaussLegendre;
use fisher_modes::specfun::{spherical_bessel_j, spherical_bessel_zero};
use fisher_modes::{AngularIndex, CoordPoint, Error, MetricSpec};
use num_complex::Complex64;
use proptest::prelude::*;

fn idx(l: u32, m: i32) -> AngularIndex {
    AngularIndex::new(l, m).unwrap()
}

fn free(eta: f64, l: u32, m: i32, n: u32, r_box: f64) -> ModeFunction {
    make_free_mode_in_ball(ModeSpec::free(eta, idx(l, m), 1.0, n), r_box).unwrap()
}

fn localized(eta: f64, l: u32, m: i32, n: u32, beta: f64) -> ModeFunction {
    let c = LocalizationConstraint::new(1.0 / beta.sqrt()).unwrap();
    make_localized_mode(ModeSpec::localized(eta, idx(l, m), beta, n), c).unwrap()
}

#[test]
fn box_norm_matches_closed_form() {
    // int_0^R j_l(kr)^2 r^2 dr = (R^3/2) j_{l+1}(kR)^2 when j_l(kR) = 0
    for l in 0..=4u32 {
        for n in 1..=3u32 {
            let r_box = 2.5;
            let mode = free(0.0, l, 0, n, r_box);
            let z = spherical_bessel_zero(l, n).unwrap();
            let jp = spherical_bessel_j(l + 1, z).unwrap();
            let want = 1.0 / (r_box.powi(3) / 2.0 * jp * jp).sqrt();
            let got = mode.spec().norm;
            assert!((got - want).abs() <= 1e-10 * want, "l={l} n={n}: {got} vs {want}");
            let k = z / r_box;
            assert!((mode.spec().alpha_sq - k * k).abs() <= 1e-12 * k * k);
        }
    }
}

fn radial_overlap(a: &ModeFunction, b: &ModeFunction, r_max: f64) -> f64 {
    let g = GaussLegendre::new(48);
    let pieces = 16;
    let w = r_max / f64::from(pieces);
    (0..pieces)
        .map(|i| {
            let lo = f64::from(i) * w;
            g.integrate(lo, lo + w, |r| a.radial(r).unwrap().0 * b.radial(r).unwrap().0 * r * r)
        })
        .sum()
}

#[test]
fn distinct_box_modes_are_orthogonal() {
    for l in 0..=3u32 {
        for n in 1..=3u32 {
            for n2 in (n + 1)..=4u32 {
                let a = free(0.0, l, 0, n, 1.5);
                let b = free(0.0, l, 0, n2, 1.5);
                let o = radial_overlap(&a, &b, 1.5);
                assert!(o.abs() <= 1e-8, "l={l} n={n} n'={n2}: {o:e}");
                assert!((radial_overlap(&a, &a, 1.5) - 1.0).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn gaussian_second_moment() {
    for &beta in &[0.5, 1.0, 3.0] {
        let mode = localized(0.0, 0, 0, 0, beta);
        let got = mean_r_sq(&mode).unwrap();
        assert!((got - 1.5 / beta).abs() <= 1e-10 / beta, "beta={beta}");
    }
    let mode = localized(0.0, 2, 1, 3, 2.0);
    let want = (2.0 * 3.0 + 2.0 + 1.5) / 2.0;
    assert!((mean_r_sq(&mode).unwrap() - want).abs() <= 1e-9 * want);
}

#[test]
fn sigma_constraint_fixes_beta() {
    for &(sigma, l, n) in &[(1.0, 0u32, 0u32), (0.7, 2, 1), (2.5, 1, 3)] {
        let beta = beta_for_sigma(sigma, l, n).unwrap();
        let want = (2.0 * f64::from(n) + f64::from(l) + 1.5) / (sigma * sigma);
        assert!((beta - want).abs() <= 1e-9 * want);
        let c = LocalizationConstraint::new(sigma).unwrap();
        let mode = make_localized_mode(ModeSpec::localized(0.0, idx(l, 0), beta, n), c).unwrap();
        assert!((c.ratio(&mode).unwrap() - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn localized_quantization_rejects_off_shell_alpha() {
    let c = LocalizationConstraint::new(1.0).unwrap();
    let mut spec = ModeSpec::localized(0.0, idx(1, 0), 1.0, 0);
    assert_eq!(spec.alpha_sq, 5.0);
    assert_eq!(oscillator_eigenvalue(1.0, 0, 1), 5.0);
    spec.alpha_sq = 6.0;
    assert!(matches!(make_localized_mode(spec, c), Err(Error::UnsupportedIndex { .. })));
    spec.alpha_sq = 9.0;
    assert!(matches!(make_localized_mode(spec, c), Err(Error::InvalidParameter { .. })));
}

#[test]
fn massive_dispersion_on_the_shell() {
    for &mu in &[0.0, 0.5, 1.0] {
        let alpha_sq = kg_alpha_sq(mu, 1.0, 1.0);
        assert_eq!(alpha_sq, -mu * mu);
        let dom = default_ball(idx(1, 1), 2, 3.0).unwrap();
        let mode = make_kg_mode(idx(1, 1), 2, alpha_sq, dom).unwrap();
        let k_sq = mode.wavenumber_sq().unwrap();
        let eta = mode.spec().eta;
        assert!((eta * eta - k_sq - mu * mu).abs() <= 4.0 * f64::EPSILON * eta * eta);
    }
    // With hbar and c: alpha^2 = -(mu c / hbar)^2
    assert!((kg_alpha_sq(2.0, 0.5, 3.0) + 144.0).abs() < 1e-12);
}

#[test]
fn multiplier_field_formulas() {
    let spec = ModeSpec::localized(0.5, idx(2, 1), 1.3, 1);
    let p = CoordPoint::spatial(0.8, 1.1, 0.3);
    let (k1, k2, k3) = multiplier_fields(&spec, &p).unwrap();
    let (r, s) = (p.r, p.theta.sin());
    let ll = 6.0;
    assert!((k1 - (spec.alpha_sq + 0.25 - 1.69 * r * r - ll / (r * r))).abs() < 1e-12);
    assert!((k2 - (ll - 1.0 / (s * s)) / (r * r)).abs() < 1e-12);
    assert!((k3 - 1.0 / (r * r * s * s)).abs() < 1e-12);
    // k1 + k2 + k3 = alpha^2 + eta^2 - beta^2 r^2
    assert!((k1 + k2 + k3 + 1.69 * r * r - spec.alpha_sq - 0.25).abs() < 1e-12);
}

fn all_modes() -> Vec<ModeFunction> {
    let mut out = vec![
        free(0.0, 0, 0, 1, 1.0),
        free(1.0, 2, -1, 2, 2.0),
        free(0.5, 3, 3, 1, 1.5),
        localized(0.0, 0, 0, 0, 1.0),
        localized(1.0, 1, 1, 2, 0.7),
        localized(0.3, 4, -2, 3, 2.0),
    ];
    let metric = MetricSpec::schwarzschild(1.0).unwrap();
    out.push(make_shell_mode(metric, 0.5, idx(1, 1), 1.5, 10.0, 2, 1e-10).unwrap());
    out
}

fn sample_point(mode: &ModeFunction, u: [f64; 4]) -> CoordPoint {
    let d = mode.domain();
    let lo = d.r_min + 0.02 * (d.r_max - d.r_min);
    let hi = d.r_max - 0.02 * (d.r_max - d.r_min);
    CoordPoint::new(4.0 * u[0] - 2.0, lo + u[1] * (hi - lo), 0.05 + u[2] * (PI - 0.1), 2.0 * PI * u[3])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn separable_in_time(u in prop::array::uniform4(0.0f64..1.0)) {
        for mode in all_modes() {
            let p = sample_point(&mode, u);
            let at_zero = mode.value(&CoordPoint { tau: 0.0, ..p }).unwrap();
            let expect = at_zero * Complex64::from_polar(1.0, -mode.spec().eta * p.tau);
            let got = mode.value(&p).unwrap();
            prop_assert!((got - expect).norm() <= 1e-12 * at_zero.norm().max(1e-300));
        }
    }

    #[test]
    fn analytic_partials_match_finite_differences(u in prop::array::uniform4(0.0f64..1.0)) {
        for mode in all_modes() {
            let p = sample_point(&mode, u);
            let (_, d) = mode.value_and_partials(&p).unwrap();
            let scale = d.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let h = 1e-4;
            let shifted = |k: usize, s: f64| {
                let mut q = [p.tau, p.r, p.theta, p.phi];
                q[k] += s;
                mode.value(&CoordPoint::new(q[0], q[1], q[2], q[3])).unwrap()
            };
            for (k, dk) in d.iter().enumerate() {
                let fd = (shifted(k, -2.0 * h) - shifted(k, 2.0 * h) + (shifted(k, h) - shifted(k, -h)) * 8.0)
                    / (12.0 * h);
                prop_assert!((fd - dk).norm() <= 1e-6 * scale, "{:?} k={} {} vs {}", mode.family(), k, fd, dk);
            }
        }
    }

    #[test]
    fn field_equation_residual_is_small(u in prop::array::uniform4(0.0f64..1.0)) {
        for mode in all_modes() {
            let p = sample_point(&mode, u);
            let res = pde_residual(&mode, &p).unwrap();
            prop_assert!(res <= 1e-6, "{:?} at {:?}: {:e}", mode.family(), p, res);
        }
    }
}

#[test]
fn free_mode_errors() {
    let evanescent = ModeSpec::free(1.0, idx(0, 0), -2.0, 1);
    assert!(matches!(make_free_mode_in_ball(evanescent, 1.0), Err(Error::Evanescent { .. })));
    assert!(AngularIndex::new(1, 2).is_err());
    let mode = free(0.0, 1, 0, 1, 1.0);
    assert!(matches!(
        mode.value_and_partials(&CoordPoint::spatial(0.5, 0.0, 0.0)),
        Err(Error::CoordinateSingularity { .. })
    ));
}
