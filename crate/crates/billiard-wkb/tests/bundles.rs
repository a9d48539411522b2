use std::f64::consts::PI;

use billiard_wkb::bundles::{build_maps, delta_at, Bundle, Orientation};
use billiard_wkb::geometry::BoundaryCurve;
use billiard_wkb::validation::delta_spread;
use proptest::prelude::*;

#[test]
fn circle_delta_closed_form() {
    let c = BoundaryCurve::circle(1.0).unwrap();
    for alpha in [0.2, 0.7, PI / 2.0, 2.5] {
        let b = Bundle::on_arc(&c, 0, alpha).unwrap();
        let maps = build_maps(&c, &b).unwrap();
        assert_eq!(maps.len(), 1);
        let expect = 2.0 * alpha.sin() - 2.0 * alpha * alpha.cos();
        assert!((maps[0].delta - expect).abs() < 1e-12, "α = {alpha}");
        assert!(maps[0].caustic_crossed);
    }
}

#[test]
fn associated_bundle_reverses_orientation() {
    let c = BoundaryCurve::circle(1.0).unwrap();
    let b = Bundle::on_arc(&c, 0, 0.4).unwrap();
    let a = b.associated();
    assert_eq!(a.orientation, Orientation::Associated);
    assert!((a.constant_incidence().unwrap() - (PI - 0.4)).abs() < 1e-15);
    assert!(a.associated().same_family(&b));
    assert!(!a.same_family(&b));
}

#[test]
fn caustic_of_circle_bundle() {
    let c = BoundaryCurve::circle(1.0).unwrap();
    let b = Bundle::on_arc(&c, 0, 0.5).unwrap();
    let caustic = b.caustic(&c, 0.3).unwrap();
    assert!((caustic.distance - 0.5f64.sin()).abs() < 1e-14);
    assert!(caustic.inside_billiard);
    assert!(b.jacobian(caustic.distance, 0.3).abs() < 1e-14);
}

#[test]
fn flat_bundles_have_no_caustic() {
    let r = BoundaryCurve::rectangle(2.0, 1.0).unwrap();
    let b = Bundle::on_arc(&r, 0, 1.0).unwrap();
    assert!(b.caustic_distance(0.5).is_infinite());
    assert!(build_maps(&r, &b)
        .unwrap()
        .iter()
        .all(|m| !m.caustic_crossed));
}

#[test]
fn stadium_cap_bundle_reports_non_constant_image() {
    let st = BoundaryCurve::stadium(1.0).unwrap();
    let flat = Bundle::on_arc(&st, 0, 1.0).unwrap();
    assert!(build_maps(&st, &flat).is_err());
}

proptest! {
    #[test]
    fn delta_is_constant_on_circles(r in 0.3f64..3.0, alpha in 0.05f64..3.09) {
        let c = BoundaryCurve::circle(r).unwrap();
        let b = Bundle::on_arc(&c, 0, alpha).unwrap();
        prop_assert!(delta_spread(&c, &b).unwrap() < 1e-9);
    }

    #[test]
    fn delta_is_constant_on_rectangles(a in 0.5f64..3.0, b in 0.5f64..3.0, arc in 0usize..4, alpha in 0.05f64..3.09) {
        let r = BoundaryCurve::rectangle(a, b).unwrap();
        let bundle = Bundle::on_arc(&r, arc, alpha).unwrap();
        prop_assert!(delta_spread(&r, &bundle).unwrap() < 1e-9);
    }

    #[test]
    fn maps_tile_the_source_arc(a in 0.5f64..3.0, b in 0.5f64..3.0, alpha in 0.05f64..3.09) {
        let r = BoundaryCurve::rectangle(a, b).unwrap();
        let bundle = Bundle::on_arc(&r, 0, alpha).unwrap();
        let maps = build_maps(&r, &bundle).unwrap();
        let total: f64 = maps.iter().map(|m| m.source_length).sum();
        prop_assert!((total - a).abs() < 1e-12);
        for w in maps.windows(2) {
            prop_assert!((w[0].source_start + w[0].source_length - w[1].source_start).abs() < 1e-12);
        }
    }

    #[test]
    fn rectangle_maps_preserve_lengths(a in 0.5f64..3.0, b in 0.5f64..3.0, alpha in 0.05f64..3.09, t in 0.05f64..0.95) {
        let r = BoundaryCurve::rectangle(a, b).unwrap();
        let bundle = Bundle::on_arc(&r, 0, alpha).unwrap();
        for m in build_maps(&r, &bundle).unwrap() {
            let s = m.source_start + t * m.source_length;
            prop_assert!((m.h_prime(&r, &bundle, s).unwrap().abs() - alpha.sin() / m.target_incidence.sin()).abs() < 1e-9);
            prop_assert!((delta_at(&r, &bundle, s).unwrap() - m.delta).abs() < 1e-9);
        }
    }
}
