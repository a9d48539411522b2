use std::f64::consts::PI;

use billiard_wkb::geometry::Rational;
use billiard_wkb::oracle::exact_rectangle_spectrum;
use billiard_wkb::quantize::{
    bouncing_mode_spectrum, broken_rectangle_spectrum, circle_condition, circle_spectrum,
    circle_wavenumber, inverse_action, rectangle_spectrum, Axis, CommensurateSpec, Family,
    QuantumNumbers,
};
use billiard_wkb::transport::circle_first_energy;
use proptest::prelude::*;

#[test]
fn circle_levels_are_flagged_degenerate_for_nonzero_m() {
    for l in circle_spectrum(1.0, 3, 4, 1).unwrap() {
        let QuantumNumbers::Circle { m, .. } = l.quantum else {
            panic!("not a circle level")
        };
        assert_eq!(l.degenerate, m != 0);
        assert_eq!(l.family, Family::Circle);
    }
}

#[test]
fn circle_first_order_uses_the_closed_form() {
    for l in circle_spectrum(2.0, 2, 3, 1).unwrap() {
        assert!((l.e1 - circle_first_energy(l.alpha)).abs() < 1e-12);
        assert!((l.energy() - (l.e0 + l.e1 / 4.0)).abs() < 1e-15);
    }
    assert!(circle_spectrum(1.0, 2, 3, 0)
        .unwrap()
        .iter()
        .all(|l| l.e1 == 0.0));
}

#[test]
fn lambda_scales_energies() {
    let one = circle_spectrum(1.0, 2, 3, 0).unwrap();
    let two = circle_spectrum(2.0, 2, 3, 0).unwrap();
    for (a, b) in one.iter().zip(&two) {
        assert!((a.e0 - 4.0 * b.e0).abs() < 1e-12 * a.e0);
        assert!((a.wavenumber() - b.wavenumber()).abs() < 1e-12 * a.wavenumber());
    }
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(rectangle_spectrum(-1.0, 1.0, 1.0, 2, 2).is_err());
    assert!(circle_spectrum(0.0, 1, 1, 0).is_err());
    assert!(CommensurateSpec::new(
        Rational::new(1, 1),
        Rational::new(3, 2),
        Rational::new(1, 2)
    )
    .is_err());
    assert!(CommensurateSpec::from_f64(1.0, 0.5, 1.0 / 2f64.sqrt()).is_err());
}

#[test]
fn horizontal_and_vertical_bouncing_modes_cover_the_same_levels() {
    let mut v: Vec<f64> = bouncing_mode_spectrum(2.0, 1.0, 1.0, 6, 6, Axis::Vertical)
        .unwrap()
        .iter()
        .map(|l| l.energy())
        .collect();
    let mut h: Vec<f64> = bouncing_mode_spectrum(2.0, 1.0, 1.0, 6, 6, Axis::Horizontal)
        .unwrap()
        .iter()
        .map(|l| l.energy())
        .collect();
    v.sort_by(f64::total_cmp);
    h.sort_by(f64::total_cmp);
    for (a, b) in v.iter().zip(&h) {
        assert!((a - b).abs() < 1e-12 * a);
    }
}

#[test]
fn broken_rectangle_with_thin_bay() {
    let spec = CommensurateSpec::new(
        Rational::new(1, 1),
        Rational::new(2, 3),
        Rational::new(1, 4),
    )
    .unwrap();
    assert_eq!((spec.n0, spec.m0), (3, 4));
    let levels = broken_rectangle_spectrum(&spec, 1.0, 2, 2).unwrap();
    let e = levels[0].energy();
    assert!((e - PI * PI / 2.0 * (9.0 + 16.0)).abs() < 1e-12);
}

proptest! {
    #[test]
    fn circle_roots_satisfy_their_condition(m in 0u32..12, r in 1u32..40) {
        let k = circle_wavenumber(m, r).unwrap();
        prop_assert!(k > m as f64);
        prop_assert!(circle_condition(k, m as f64, r).abs() < 1e-10);
    }

    #[test]
    fn circle_wavenumbers_increase_with_r(m in 0u32..8, r in 1u32..30) {
        prop_assert!(circle_wavenumber(m, r + 1).unwrap() > circle_wavenumber(m, r).unwrap());
    }

    #[test]
    fn inverse_action_is_decreasing(x in 0.01f64..0.98) {
        prop_assert!(inverse_action(x) > inverse_action(x + 0.01));
        prop_assert!(inverse_action(x) > 0.0);
    }

    #[test]
    fn rectangle_levels_are_exact(a in 0.5f64..4.0, b in 0.5f64..4.0, lambda in 0.5f64..3.0) {
        let levels = rectangle_spectrum(a, b, lambda, 5, 5).unwrap();
        let exact = exact_rectangle_spectrum(a, b, lambda, 5, 5);
        for (l, x) in levels.iter().zip(&exact) {
            prop_assert!((l.energy() - x.energy).abs() <= 1e-12 * x.energy.max(1.0));
            prop_assert!(l.alpha > 0.0 && l.alpha < PI / 2.0);
        }
    }

    #[test]
    fn zero_bay_reproduces_the_rectangle(num in 1i64..6, den in 1i64..6) {
        let b = Rational::new(num, den);
        let spec = CommensurateSpec::new(b, Rational::new(1, 1), b).unwrap();
        let mut broken: Vec<f64> = broken_rectangle_spectrum(&spec, 1.0, 4, 4).unwrap().iter().map(|l| l.energy()).collect();
        let mut plain: Vec<f64> = rectangle_spectrum(1.0, b.to_f64(), 1.0, 4, 4).unwrap().iter().map(|l| l.energy()).collect();
        broken.sort_by(f64::total_cmp);
        plain.sort_by(f64::total_cmp);
        for (x, y) in broken.iter().zip(&plain) {
            prop_assert!((x - y).abs() <= 1e-12 * y);
        }
    }
}
