use std::f64::consts::PI;

use billiard_wkb::bundles::Bundle;
use billiard_wkb::geometry::BoundaryCurve;
use billiard_wkb::oracle::simulate_ray_families;
use billiard_wkb::quantize::rectangle_spectrum;
use billiard_wkb::skeleton::{
    associated_skeleton, build_skeleton, last_quantization_residual, trace_orbit, Closure,
    Termination,
};
use billiard_wkb::validation::rectangle_skeleton;
use billiard_wkb::Error;
use proptest::prelude::*;

fn closed(curve: &BoundaryCurve, alpha: f64) -> billiard_wkb::skeleton::Skeleton {
    build_skeleton(curve, &Bundle::on_arc(curve, 0, alpha).unwrap(), 64)
        .unwrap()
        .closed()
        .unwrap()
}

#[test]
fn circle_skeleton_is_one_bundle_and_degenerate() {
    let c = BoundaryCurve::circle(1.0).unwrap();
    let sk = closed(&c, 0.9);
    assert_eq!(sk.len(), 1);
    assert!(!sk.is_self_associated());
    let assoc = associated_skeleton(&c, &sk).unwrap();
    assert!(!assoc.same_bundles(&sk));
    assert!(closed(&c, PI / 2.0).is_self_associated());
}

#[test]
fn rectangle_skeleton_is_strongly_connected() {
    let r = BoundaryCurve::rectangle(2.0, 1.0).unwrap();
    let sk = closed(&r, 1.0);
    assert_eq!(sk.len(), 8);
    assert!(sk.is_strongly_connected());
    assert!(sk.is_self_associated());
}

#[test]
fn skeleton_matches_simulated_families() {
    let r = BoundaryCurve::rectangle(2.0, 1.0).unwrap();
    let sk = closed(&r, 1.0);
    let simulated = simulate_ray_families(&r, 0.613_717, 1.0, 200).unwrap();
    assert_eq!(simulated.len(), sk.len());
    for (arc, alpha) in simulated {
        assert!(sk
            .bundles
            .iter()
            .any(|b| b.arc == arc && (b.constant_incidence().unwrap() - alpha).abs() < 1e-9));
    }
}

#[test]
fn stadium_flat_does_not_close() {
    let st = BoundaryCurve::stadium(1.0).unwrap();
    match build_skeleton(&st, &Bundle::on_arc(&st, 0, 1.0).unwrap(), 64).unwrap() {
        Closure::NotReached { partial, .. } => assert!(!partial.is_empty()),
        Closure::Closed(_) => panic!("stadium family closed"),
    }
}

#[test]
fn generic_trace_does_not_close() {
    let r = BoundaryCurve::rectangle(2.0, 1.0).unwrap();
    let sk = closed(&r, 1.0);
    let trace = trace_orbit(&r, &sk, 0, 0.613_717, 50, None).unwrap();
    assert_eq!(trace.termination, Termination::MaxBounces);
    assert_eq!(
        last_quantization_residual(&trace, 3.0),
        Err(Error::TraceNotClosed)
    );
}

#[test]
fn trace_lengths_accumulate() {
    let r = BoundaryCurve::rectangle(2.0, 1.0).unwrap();
    let level = rectangle_spectrum(2.0, 1.0, 1.0, 4, 1).unwrap()[3];
    let sk = rectangle_skeleton(&r, &level).unwrap();
    let trace = trace_orbit(&r, &sk, 0, 0.613_717, 100, None).unwrap();
    assert!(trace.closed());
    assert_eq!(trace.bounce_count(), 4);
    assert!((trace.total_length - 2.0 * 5f64.sqrt()).abs() < 1e-12);
    assert!((trace.delta_sum - trace.total_length).abs() < 1e-12);
    let cum: Vec<f64> = trace.hits.iter().map(|h| h.cum_length).collect();
    assert!(cum.windows(2).all(|w| w[1] > w[0]));
}

proptest! {
    #[test]
    fn rectangle_levels_close_with_unit_phase(n in 1u32..8, m in 1u32..8) {
        let r = BoundaryCurve::rectangle(2.0, 1.0).unwrap();
        let level = rectangle_spectrum(2.0, 1.0, 1.0, n, m).unwrap().into_iter().last().unwrap();
        let sk = rectangle_skeleton(&r, &level).unwrap();
        let trace = trace_orbit(&r, &sk, 0, 0.613_717, 4000, None).unwrap();
        prop_assert!(trace.closed());
        prop_assert!(last_quantization_residual(&trace, level.wavenumber()).unwrap().norm() < 1e-10);
    }

    #[test]
    fn circle_skeletons_have_one_bundle(alpha in 0.05f64..3.09) {
        let c = BoundaryCurve::circle(1.0).unwrap();
        prop_assert_eq!(closed(&c, alpha).len(), 1);
    }
}
