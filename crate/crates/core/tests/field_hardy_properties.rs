use magharden::circle::{self, CirclePotential};
use magharden::field::{
    self, distance_to_integer, ComplexField2D, ComponentKind, FieldComponent, GaugePotential, VectorPotential,
};
use magharden::hardy::{self, CurveOptions, HardyEstimate};
use magharden::verify::{self, HardyWeight, QuadratureGrid, TestFunction2D};
use magharden::{Error, C64};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn component() -> impl Strategy<Value = FieldComponent> {
    (
        prop_oneof![
            Just(ComponentKind::Gaussian),
            Just(ComponentKind::CompactBump),
            Just(ComponentKind::DiskConstant)
        ],
        (-1.0..1.0f64, -1.0..1.0f64),
        0.3..1.2f64,
        (-2.0..2.0f64, -2.0..2.0f64),
    )
        .prop_map(|(kind, (cx, cy), scale, (re, im))| FieldComponent {
            kind,
            center: [cx, cy],
            scale,
            amplitude: C64::new(re, im),
        })
}

fn any_field() -> impl Strategy<Value = ComplexField2D> {
    prop::collection::vec(component(), 1..=3).prop_map(|c| ComplexField2D::new(c).unwrap())
}

fn compact_field() -> impl Strategy<Value = ComplexField2D> {
    prop::collection::vec(component(), 1..=3).prop_map(|c| {
        let c = c
            .into_iter()
            .map(|mut c| {
                if c.kind == ComponentKind::Gaussian {
                    c.kind = ComponentKind::CompactBump;
                }
                c
            })
            .collect();
        ComplexField2D::new(c).unwrap()
    })
}

fn point() -> impl Strategy<Value = (f64, f64)> {
    (0.1..10.0f64, -std::f64::consts::PI..std::f64::consts::PI)
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn gauge_is_transverse_and_matches_polar_form(f in any_field(), pts in prop::collection::vec(point(), 20)) {
        let gauge = GaugePotential::new(f.clone());
        for (r, theta) in pts {
            let x = [r * theta.cos(), r * theta.sin()];
            let a = gauge.eval(x).unwrap();
            let radial = x[0] * a[0] + x[1] * a[1];
            let size = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
            prop_assert!(radial.norm() <= 1e-10 * (1.0 + r * size));
            let tangential = -theta.sin() * a[0] + theta.cos() * a[1];
            let polar = f.polar_potential(r, theta).unwrap() / r;
            prop_assert!((tangential - polar).norm() <= 1e-9, "{tangential} vs {polar}");
        }
    }

    #[test]
    fn mean_is_constant_beyond_support(f in compact_field(), extra in 0.0..5.0f64) {
        let support = f.support_radius().unwrap();
        let near = circle::mean(&f.slice(support, 512).unwrap()).mean;
        let far = circle::mean(&f.slice(support + extra + 0.01, 512).unwrap()).mean;
        prop_assert!((near - far).norm() <= 1e-9, "{near} vs {far}");
        // trapezoid means converge only algebraically across the kinks a disk leaves in a(r, .)
        if f.components.iter().all(|c| c.kind != ComponentKind::DiskConstant) {
            prop_assert!((far - f.total_flux()).norm() <= 1e-9, "{far} vs {}", f.total_flux());
        }
    }

    #[test]
    fn potential_vanishes_quadratically_at_origin(f in any_field(), r in 1e-4..0.1f64, theta in -3.0..3.0f64) {
        // |a(r, theta)| <= sup|B| r^2 / 2
        let a = f.polar_potential(r, theta).unwrap();
        prop_assert!(a.norm() <= 0.5 * f.sup_abs() * r * r * (1.0 + 1e-9));
    }

    #[test]
    fn weighted_form_identity(
        coeffs in prop::collection::vec((-0.5..0.5f64, -0.5..0.5f64), 9),
        psi in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 9),
    ) {
        let modes = |c: &[(f64, f64)]| -> Vec<(i64, C64)> {
            c.iter().enumerate().map(|(i, &(re, im))| (i as i64 - 4, C64::new(re, im))).collect()
        };
        let a = CirclePotential::from_fourier(&modes(&coeffs), 128).unwrap();
        let psi = CirclePotential::from_fourier(&modes(&psi), 128).unwrap();
        let (lhs, rhs) = field::weighted_form_identity(&a, psi.samples()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
    }
}

fn curve_of(f: &ComplexField2D, radii: &[f64], modes: usize) -> hardy::LambdaCurve {
    hardy::lambda_curve_with(f, radii, CurveOptions { modes, grid: 256 }).unwrap()
}

proptest! {
    #![proptest_config(config(6))]

    #[test]
    fn lambda_curve_bound_and_lipschitz(f in any_field()) {
        let radii = hardy::log_radii(0.1, 6.0, 24);
        let curve = curve_of(&f, &radii, 8);
        for i in 0..curve.len() {
            prop_assert!(curve.lambda[i] >= 0.0);
            prop_assert!(curve.lambda[i] <= curve.mean_abs_sq[i] + 1e-10);
        }
        for i in 1..curve.len() {
            let lo = f.slice(radii[i - 1], 128).unwrap();
            let hi = f.slice(radii[i], 128).unwrap();
            let sigma = lo.samples().iter().zip(hi.samples()).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
            let scale = curve.mean_abs_sq[i - 1].max(curve.mean_abs_sq[i]).sqrt();
            let bound = sigma * sigma + 2.0 * sigma * scale;
            let jump = (curve.lambda[i] - curve.lambda[i - 1]).abs();
            prop_assert!(jump <= bound + 2e-8, "r = {}: {jump} > {bound}", radii[i]);
        }
    }

    #[test]
    fn lambda_curve_vanishes_only_at_anti_flux(
        center in (-0.4..0.4f64, -0.4..0.4f64),
        scale in 0.4..1.0f64,
        flux in prop_oneof![Just(C64::new(1.0, 0.0)), Just(C64::new(-2.0, 0.0)), (0.2..0.8f64).prop_map(|x| C64::new(x, 0.0)), (0.1..0.5f64).prop_map(|y| C64::new(1.0, y))],
    ) {
        let f = ComplexField2D::compact_bump_with_flux([center.0, center.1], scale, flux).unwrap();
        let support = f.support_radius().unwrap();
        let radii = [support, 1.5 * support, 4.0 * support, 20.0];
        let curve = curve_of(&f, &radii, 32);
        prop_assert!(curve.converged.iter().any(|&c| c), "no radius resolved");
        for i in (0..curve.len()).filter(|&i| curve.converged[i]) {
            let d = distance_to_integer(curve.mean_re[i]).max(curve.mean_im[i].abs());
            if d <= 1e-9 {
                prop_assert!(curve.lambda[i] <= 1e-8, "lambda {} at anti-flux radius", curve.lambda[i]);
            } else {
                prop_assert!(d >= 0.05);
                prop_assert!(curve.lambda[i] > 1e-6, "lambda {} with distance {d}", curve.lambda[i]);
            }
        }
    }

    #[test]
    fn estimates_pass_audit(
        amplitude in (-3.0..3.0f64, -1.0..1.0f64),
        scale in 0.4..1.2f64,
        integer_flux in any::<bool>(),
        slack in 0.0..2.0f64,
    ) {
        let total = if integer_flux { C64::new(amplitude.0.round(), 0.0) } else { C64::new(amplitude.0, amplitude.1) };
        let f = ComplexField2D::compact_bump_with_flux([0.1, -0.2], scale, total).unwrap();
        let radii = hardy::log_radii(0.05, 20.0, 40);
        let curve = curve_of(&f, &radii, 32);
        let support = f.support_radius().unwrap();
        // the logarithmic estimate needs the flux condition at one radius,
        // the compact one needs it asymptotically
        let somewhere = (0..curve.len())
            .any(|i| field::flux_verdict(C64::new(curve.mean_re[i], curve.mean_im[i])).holds());
        audit(hardy::hardy_constant_log(&f, &curve), somewhere)?;
        audit(hardy::hardy_constant_compact(&f, &curve, support + slack), field::flux_verdict(total).holds())?;
        // a disk that misses part of the support is a gate failure
        audit(hardy::hardy_constant_compact(&f, &curve, 0.5 * support), false)?;
    }
}

fn audit(result: magharden::Result<HardyEstimate>, gate_passes: bool) -> Result<(), TestCaseError> {
    match result {
        Ok(e) => {
            prop_assert!(gate_passes, "constant {} despite failing gate", e.constant);
            prop_assert!(e.constant > 0.0);
            let again = e.recompute().unwrap();
            prop_assert!((again - e.constant).abs() <= 1e-12 * e.constant, "{again} vs {}", e.constant);
        }
        Err(err) => {
            prop_assert!(!gate_passes, "gate passes but estimate failed: {err}");
            prop_assert!(err.is_hypothesis_gate(), "{err}");
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(config(4))]

    #[test]
    fn radial_quotient_matches_planar_lift(n in 4.0..300.0f64) {
        let f = ComplexField2D::compact_bump_with_flux([0.0, 0.0], 1.0, C64::new(1.0, 0.0)).unwrap();
        let radius = f.support_radius().unwrap();
        let radial = hardy::optimality_sequence(n, radius).unwrap();
        let suite = vec![TestFunction2D::fn_sequence(n, 1).unwrap()];
        let grid = QuadratureGrid::covering_annuli(&suite, 3000, 16).unwrap();
        let report = verify::check_hardy(&GaugePotential::new(f), HardyWeight::Inverse, 0.0, &suite, grid).unwrap();
        let lifted = report.entries[0].quotient;
        prop_assert!((lifted - radial.quotient).abs() <= 1e-3 * radial.quotient, "{lifted} vs {}", radial.quotient);
    }
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn interior_gamma_matches_fem(r0 in 0.2..5.0f64) {
        let exact = hardy::gamma_1d(r0).unwrap();
        let fem = verify::gamma_interior_oracle(r0, 400).unwrap();
        prop_assert!((fem - exact.interior).abs() <= 2e-4 * exact.interior, "{fem} vs {}", exact.interior);
        prop_assert_eq!(exact.gamma, exact.interior.min(exact.exterior));
    }

    #[test]
    fn invalid_radius_is_rejected(r0 in prop_oneof![Just(0.0), Just(-1.0), Just(f64::NAN), Just(f64::INFINITY)]) {
        prop_assert!(matches!(hardy::gamma_1d(r0), Err(Error::InvalidArgument(_))));
    }
}

#[test]
fn exterior_gamma_matches_fem() {
    // truncation to |ln t| <= 35 biases the oracle upward by under 1%
    let fem = verify::gamma_exterior_oracle(35.0, 20).unwrap();
    let exact = hardy::gamma_1d(1.0).unwrap().exterior;
    assert!(fem >= exact && fem - exact <= 0.01 * exact, "{fem} vs {exact}");
}
