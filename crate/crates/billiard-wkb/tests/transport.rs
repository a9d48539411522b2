use std::f64::consts::PI;

use billiard_wkb::transport::{
    caustic_continuation_factor, circle_energy_series, circle_first_energy, ChiSeries, Contour,
    EnergySeries, LaplacianDS, ReducedOperator, Series, Signature,
};
use billiard_wkb::Error;
use num_complex::Complex64;
use proptest::prelude::*;

/// Ray coordinates `(d, s)` of a Cartesian point for a bundle of incidence `α`
/// on the unit circle (`κ = 1`, before the caustic) or on the x axis (`κ = 0`).
fn ray_coordinates(alpha: f64, kappa: f64, x: f64, y: f64) -> (f64, f64) {
    if kappa == 0.0 {
        let d = y / alpha.sin();
        (d, x - d * alpha.cos())
    } else {
        let r = x.hypot(y);
        let w = (r * r - alpha.cos().powi(2)).sqrt();
        let phi0 = (alpha.cos() / r).acos();
        (alpha.sin() - w, y.atan2(x) + phi0 - alpha)
    }
}

fn cartesian(alpha: f64, kappa: f64, d: f64, s: f64) -> (f64, f64) {
    if kappa == 0.0 {
        (s + d * alpha.cos(), d * alpha.sin())
    } else {
        let g = s + PI / 2.0 + alpha;
        (s.cos() + d * g.cos(), s.sin() + d * g.sin())
    }
}

/// Fourth-order finite-difference Cartesian Laplacian.
fn fd_laplacian(f: &dyn Fn(f64, f64) -> f64, x: f64, y: f64) -> f64 {
    let h = 2e-3;
    let second = |g: &dyn Fn(f64) -> f64| {
        (-g(2.0 * h) + 16.0 * g(h) - 30.0 * g(0.0) + 16.0 * g(-h) - g(-2.0 * h)) / (12.0 * h * h)
    };
    second(&|t| f(x + t, y)) + second(&|t| f(x, y + t))
}

#[test]
fn ray_coordinates_invert_the_embedding() {
    for (alpha, kappa) in [(0.9, 1.0), (0.4, 0.0)] {
        let (x, y) = cartesian(alpha, kappa, 0.3, 1.1);
        let (d, s) = ray_coordinates(alpha, kappa, x, y);
        assert!((d - 0.3).abs() < 1e-13 && (s - 1.1).abs() < 1e-13);
    }
}

#[test]
fn laplacian_coefficients_match_finite_differences() {
    // g(d, s) = sin(1.3 d) cos(2 s) + d³ with its exact partial derivatives.
    let g = |d: f64, s: f64| (1.3 * d).sin() * (2.0 * s).cos() + d.powi(3);
    let g_d = |d: f64, s: f64| 1.3 * (1.3 * d).cos() * (2.0 * s).cos() + 3.0 * d * d;
    let g_s = |d: f64, s: f64| -2.0 * (1.3 * d).sin() * (2.0 * s).sin();
    let g_dd = |d: f64, s: f64| -1.69 * (1.3 * d).sin() * (2.0 * s).cos() + 6.0 * d;
    let g_ss = |d: f64, s: f64| -4.0 * (1.3 * d).sin() * (2.0 * s).cos();
    let g_ds = |d: f64, s: f64| -2.6 * (1.3 * d).cos() * (2.0 * s).sin();
    for (alpha, kappa) in [(0.9, 1.0), (PI / 2.0, 1.0), (0.4, 0.0), (2.2, 0.0)] {
        let lap = LaplacianDS { alpha, kappa };
        for (d, s) in [(0.1, 0.5), (0.3, 2.0), (0.05, -1.0)] {
            let (x, y) = cartesian(alpha, kappa, d, s);
            let field = |x: f64, y: f64| {
                let (d, s) = ray_coordinates(alpha, kappa, x, y);
                g(d, s)
            };
            let c = lap.coefficients(d);
            let formula = c.dd * g_dd(d, s)
                + c.ss * g_ss(d, s)
                + c.sd * g_ds(d, s)
                + c.d * g_d(d, s)
                + c.s * g_s(d, s);
            let fd = fd_laplacian(&field, x, y);
            assert!(
                (formula - fd).abs() < 1e-6 * (1.0 + fd.abs()),
                "α = {alpha}, κ = {kappa}: {formula} vs {fd}"
            );
        }
    }
}

#[test]
fn reduced_operator_matches_conjugated_laplacian() {
    // D f = J^{1/2} Δ (J^{-1/2} f) for s-independent f.
    for alpha in [0.9, 1.2, PI / 2.0] {
        let op = ReducedOperator::new(alpha, 1.0);
        for (power, log) in [(0, 0), (1, 0), (-1, 0), (2, 1)] {
            let f = Series::monomial(Complex64::new(1.0, 0.0), power, log);
            let df = op.apply(&f);
            for d in [0.1, 0.35] {
                let (x, y) = cartesian(alpha, 1.0, d, 0.7);
                let field = |x: f64, y: f64| {
                    let (d, _) = ray_coordinates(alpha, 1.0, x, y);
                    let v = alpha.sin() - d;
                    v.powf(-0.5) * f.eval(Complex64::new(v, 0.0), Contour::Above).re
                };
                let v = alpha.sin() - d;
                let fd = v.sqrt() * fd_laplacian(&field, x, y);
                let closed = df.eval(Complex64::new(v, 0.0), Contour::Above).re;
                assert!(
                    (closed - fd).abs() < 1e-6 * (1.0 + fd.abs()),
                    "α = {alpha}, v^{power} ln^{log}: {closed} vs {fd}"
                );
            }
        }
    }
}

#[test]
fn first_energy_closed_form_and_recursion_agree() {
    for alpha in [0.3, 0.8, 1.0, PI / 2.0] {
        let (energy, _) = circle_energy_series(alpha, 1.0, 4.0, 1, Signature::Plus);
        assert!((energy.correction(1) - circle_first_energy(alpha)).norm() < 1e-12);
    }
    assert_eq!(circle_first_energy(PI / 2.0), 0.125);
}

#[test]
fn contours_follow_signatures() {
    assert_eq!(Signature::Plus.contour(), Contour::Above);
    assert_eq!(Signature::Minus.contour(), Contour::Below);
    assert_eq!(
        caustic_continuation_factor(Signature::Plus),
        Complex64::new(0.0, 1.0)
    );
    let chi = ChiSeries::zeroth(
        ReducedOperator::new(1.0, 1.0),
        2.0,
        Signature::Plus,
        Complex64::new(1.0, 0.0),
    );
    assert_eq!(
        chi.values(0.5, Contour::Below),
        Err(Error::ContourSignatureMismatch)
    );
}

#[test]
fn signatures_give_conjugate_coefficients() {
    let alpha = 0.8;
    let (ep, cp) = circle_energy_series(alpha, 1.0, 3.0, 2, Signature::Plus);
    let (em, cm) = circle_energy_series(alpha, 1.0, 3.0, 2, Signature::Minus);
    assert!((ep.correction(1) - em.correction(1)).norm() < 1e-12);
    for d in [0.2, 1.0, 1.5] {
        let vp = cp.values(d, Contour::Above).unwrap();
        let vm = cm.values(d, Contour::Below).unwrap();
        for (a, b) in vp.iter().zip(&vm) {
            assert!((a.conj() - b).norm() < 1e-12);
        }
    }
}

#[test]
fn flat_bundles_transport_trivially() {
    let op = ReducedOperator::new(0.7, 0.0);
    let chi = ChiSeries::zeroth(op, 2.0, Signature::Plus, Complex64::new(1.0, 0.0));
    let next = chi.extend(&EnergySeries::new(2.0), Complex64::new(0.0, 0.0));
    assert!(next.values(1.3, Contour::Above).unwrap()[1].norm() < 1e-15);
}

proptest! {
    #[test]
    fn circle_chi1_vanishes_after_one_chord(alpha in 0.1f64..1.57, p in 0.5f64..20.0) {
        let mut energy = EnergySeries::new(p * p / 2.0);
        energy.corrections.push(Complex64::new(circle_first_energy(alpha), 0.0));
        let chi = ChiSeries::zeroth(ReducedOperator::new(alpha, 1.0), p, Signature::Plus, Complex64::new(1.0, 0.0))
            .extend(&energy, Complex64::new(0.0, 0.0));
        prop_assert!(chi.values(2.0 * alpha.sin(), Contour::Above).unwrap()[1].norm() < 1e-9);
    }

    #[test]
    fn closed_and_numeric_integrals_agree(alpha in 0.3f64..1.5, t in 0.05f64..0.8, past in any::<bool>()) {
        // End points at least 0.2 sin α away from the caustic.
        let d = if past { 2.0 - t } else { t };
        let op = ReducedOperator::new(alpha, 1.0);
        let f = Series::monomial(Complex64::new(1.0, 0.0), -3, 0).plus(&Series::monomial(Complex64::new(0.5, 0.0), -1, 0));
        let d = d * alpha.sin();
        let closed = op.integrate_closed(&f, d, Contour::Above);
        let numeric = op.integrate_numeric(&f, d, Contour::Above, 0.3 * alpha.sin()).unwrap();
        prop_assert!((closed - numeric).norm() < 1e-8 * (1.0 + closed.norm()));
    }
}
