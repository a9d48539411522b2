//! Skeletons: finite families of bundles closed under reflection.
//!
//! Starting from a seed bundle, every bundle is pushed through the billiard
//! and the reflected images are collected until no new family appears. Rays
//! are then followed through the resulting transition table to accumulate
//! the phases that enter the last quantization condition.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bundles::{build_maps, Bundle, BundleMap};
use crate::error::{Error, Result};
use crate::geometry::BoundaryCurve;
use crate::transport::Signature;

/// One entry of the transition table.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub target: usize,
    pub map: BundleMap,
}

impl Transition {
    /// Amplitude factor carried by χ across this flight: `−σi` when the flight
    /// crosses the caustic, `1` otherwise.
    pub fn eta(&self, sigma: Signature) -> Complex64 {
        if self.map.caustic_crossed {
            crate::transport::caustic_continuation_factor(sigma).conj()
        } else {
            Complex64::new(1.0, 0.0)
        }
    }
}

/// A closed skeleton with its transition table.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub bundles: Vec<Bundle>,
    /// `transitions[k]` lists the pieces of bundle `k` and where they land.
    pub transitions: Vec<Vec<Transition>>,
}

/// Result of the closure iteration.
#[derive(Debug, Clone)]
pub enum Closure {
    Closed(Skeleton),
    /// The iteration did not close; carries the bundles found so far.
    NotReached {
        partial: Vec<Bundle>,
        reason: String,
    },
}

impl Closure {
    pub fn closed(self) -> Option<Skeleton> {
        match self {
            Closure::Closed(sk) => Some(sk),
            Closure::NotReached { .. } => None,
        }
    }
}

/// Reflects bundles until the family closes or `max_bundles` is exceeded.
pub fn build_skeleton(curve: &BoundaryCurve, seed: &Bundle, max_bundles: usize) -> Result<Closure> {
    let mut bundles = vec![seed.clone()];
    let mut transitions: Vec<Vec<Transition>> = Vec::new();
    let mut next = 0;
    while next < bundles.len() {
        let maps = match build_maps(curve, &bundles[next]) {
            Ok(m) => m,
            Err(Error::NonConstantIncidence) => {
                return Ok(Closure::NotReached {
                    partial: bundles,
                    reason: "reflected incidence varies along the arc".into(),
                })
            }
            Err(e) => return Err(e),
        };
        let mut row = Vec::with_capacity(maps.len());
        for map in maps {
            let mut image = Bundle::on_arc(curve, map.target_arc, map.target_incidence)?;
            image.orientation = seed.orientation;
            let target = match bundles.iter().position(|b| b.same_family(&image)) {
                Some(i) => i,
                None => {
                    if bundles.len() >= max_bundles {
                        return Ok(Closure::NotReached {
                            partial: bundles,
                            reason: format!("more than {max_bundles} bundles"),
                        });
                    }
                    bundles.push(image);
                    bundles.len() - 1
                }
            };
            row.push(Transition { target, map });
        }
        transitions.push(row);
        next += 1;
    }
    Ok(Closure::Closed(Skeleton {
        bundles,
        transitions,
    }))
}

impl Skeleton {
    pub fn len(&self) -> usize {
        self.bundles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bundles.is_empty()
    }

    /// Same families regardless of order.
    pub fn same_bundles(&self, other: &Skeleton) -> bool {
        self.len() == other.len()
            && self
                .bundles
                .iter()
                .all(|b| other.bundles.iter().any(|o| o.same_family(b)))
    }

    /// Whether time reversal maps the skeleton onto itself.
    pub fn is_self_associated(&self) -> bool {
        self.bundles
            .iter()
            .all(|b| self.bundles.iter().any(|o| o.same_family(&b.associated())))
    }

    /// Whether every bundle can reach every other through transitions.
    pub fn is_strongly_connected(&self) -> bool {
        let n = self.len();
        let reach = |forward: bool| {
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(k) = stack.pop() {
                for j in 0..n {
                    let linked = if forward {
                        self.transitions[k].iter().any(|t| t.target == j)
                    } else {
                        self.transitions[j].iter().any(|t| t.target == k)
                    };
                    if linked && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            seen.into_iter().all(|x| x)
        };
        n > 0 && reach(true) && reach(false)
    }
}

/// The time-reversed skeleton, with its transitions rebuilt.
pub fn associated_skeleton(curve: &BoundaryCurve, sk: &Skeleton) -> Result<Skeleton> {
    let bundles: Vec<Bundle> = sk.bundles.iter().map(Bundle::associated).collect();
    let mut transitions = Vec::with_capacity(bundles.len());
    for b in &bundles {
        let mut row = Vec::new();
        for map in build_maps(curve, b)? {
            let image = Bundle::on_arc(curve, map.target_arc, map.target_incidence)?;
            let target = bundles
                .iter()
                .position(|o| o.same_family(&image))
                .ok_or_else(|| Error::InvalidInput("associated family is not closed".into()))?;
            row.push(Transition { target, map });
        }
        transitions.push(row);
    }
    Ok(Skeleton {
        bundles,
        transitions,
    })
}

/// One recorded flight of a traced ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceHit {
    pub bundle: usize,
    /// Launch point of the flight.
    pub s: f64,
    #[serde(rename = "D")]
    pub chord: f64,
    #[serde(rename = "cumLength")]
    pub cum_length: f64,
}

/// Why a trace stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Closed,
    MaxBounces,
    Corner,
}

/// A ray followed through the skeleton.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitTrace {
    pub start_bundle: usize,
    pub start_s: f64,
    pub hits: Vec<TraceHit>,
    pub total_length: f64,
    /// `Σδ` over the flights.
    pub delta_sum: f64,
    pub caustic_crossings: usize,
    pub termination: Termination,
    /// Smallest arc-length distance to the start point over returns to the start bundle.
    pub min_return_distance: f64,
}

impl OrbitTrace {
    pub fn bounce_count(&self) -> usize {
        self.hits.len()
    }

    pub fn closed(&self) -> bool {
        self.termination == Termination::Closed
    }

    /// Accumulated phase `λp Σδ` plus the caustic phases for signature `+`.
    pub fn phase_sum(&self, lambda_p: f64) -> f64 {
        lambda_p * self.delta_sum - std::f64::consts::FRAC_PI_2 * self.caustic_crossings as f64
    }
}

/// Follows a ray from `start_s` on bundle `start_bundle`.
///
/// `return_tol` defaults to `1e-9 L`.
pub fn trace_orbit(
    curve: &BoundaryCurve,
    sk: &Skeleton,
    start_bundle: usize,
    start_s: f64,
    max_bounces: usize,
    return_tol: Option<f64>,
) -> Result<OrbitTrace> {
    let bundle = sk
        .bundles
        .get(start_bundle)
        .ok_or_else(|| Error::InvalidInput(format!("no bundle {start_bundle}")))?;
    let off = curve.local_offset(bundle.arc, start_s);
    if !(off > 0.0 && off < bundle.length) {
        return Err(Error::InvalidInput(
            "start point outside the bundle segment".into(),
        ));
    }
    let tol = return_tol.unwrap_or(1e-9 * curve.total_length);
    let start_s = curve.reduce(start_s);
    let mut trace = OrbitTrace {
        start_bundle,
        start_s,
        hits: Vec::new(),
        total_length: 0.0,
        delta_sum: 0.0,
        caustic_crossings: 0,
        termination: Termination::MaxBounces,
        min_return_distance: f64::INFINITY,
    };
    let (mut k, mut s) = (start_bundle, start_s);
    for _ in 0..max_bounces {
        let Some(t) = sk.transitions[k].iter().find(|t| t.map.covers(curve, s)) else {
            trace.termination = Termination::Corner;
            return Ok(trace);
        };
        let hit = match curve.shoot(&sk.bundles[k].ray(curve, s)) {
            Ok(h) => h,
            Err(Error::CornerAmbiguity { .. }) | Err(Error::Grazing { .. }) => {
                trace.termination = Termination::Corner;
                return Ok(trace);
            }
            Err(e) => return Err(e),
        };
        trace.total_length += hit.chord_length;
        trace.delta_sum += t.map.delta;
        if t.map.caustic_crossed {
            trace.caustic_crossings += 1;
        }
        trace.hits.push(TraceHit {
            bundle: k,
            s,
            chord: hit.chord_length,
            cum_length: trace.total_length,
        });
        k = t.target;
        s = hit.arrival_s;
        if k == start_bundle {
            let gap = (s - start_s).rem_euclid(curve.total_length);
            let dist = gap.min(curve.total_length - gap);
            trace.min_return_distance = trace.min_return_distance.min(dist);
            if dist < tol {
                trace.termination = Termination::Closed;
                return Ok(trace);
            }
        }
    }
    Ok(trace)
}

/// `(−1)ⁿ Π η e^{iλpΣδ} − 1` for signature `+` on a closed trace.
pub fn last_quantization_residual(trace: &OrbitTrace, lambda_p: f64) -> Result<Complex64> {
    if !trace.closed() {
        return Err(Error::TraceNotClosed);
    }
    let sign = if trace.bounce_count().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let eta = Complex64::new(0.0, -1.0).powu(trace.caustic_crossings as u32);
    let phase = Complex64::from_polar(1.0, lambda_p * trace.delta_sum);
    Ok(sign * eta * phase - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn circle_single_bundle() {
        let c = BoundaryCurve::circle(1.0).unwrap();
        let seed = Bundle::on_arc(&c, 0, 0.8).unwrap();
        let sk = build_skeleton(&c, &seed, 16).unwrap().closed().unwrap();
        assert_eq!(sk.len(), 1);
        assert!(!sk.is_self_associated());
        let assoc = associated_skeleton(&c, &sk).unwrap();
        assert!((assoc.bundles[0].constant_incidence().unwrap() - (PI - 0.8)).abs() < 1e-12);
    }

    #[test]
    fn rectangle_counts() {
        let r = BoundaryCurve::rectangle(2.0, 1.0).unwrap();
        let generic = build_skeleton(&r, &Bundle::on_arc(&r, 0, 1.0).unwrap(), 64)
            .unwrap()
            .closed()
            .unwrap();
        assert_eq!(generic.len(), 8);
        assert!(generic.is_self_associated());
        assert!(generic.is_strongly_connected());
        let normal = build_skeleton(&r, &Bundle::on_arc(&r, 0, PI / 2.0).unwrap(), 64)
            .unwrap()
            .closed()
            .unwrap();
        assert_eq!(normal.len(), 2);
        assert!(normal.is_self_associated());
    }

    #[test]
    fn stadium_flat_bundle_does_not_close() {
        let st = BoundaryCurve::stadium(1.0).unwrap();
        let out = build_skeleton(&st, &Bundle::on_arc(&st, 0, 1.0).unwrap(), 64).unwrap();
        assert!(matches!(out, Closure::NotReached { .. }));
        let bouncing = build_skeleton(&st, &Bundle::on_arc(&st, 0, PI / 2.0).unwrap(), 64).unwrap();
        assert_eq!(bouncing.closed().unwrap().len(), 2);
    }

    #[test]
    fn diameter_orbit() {
        let c = BoundaryCurve::circle(1.0).unwrap();
        let sk = build_skeleton(&c, &Bundle::on_arc(&c, 0, PI / 2.0).unwrap(), 4)
            .unwrap()
            .closed()
            .unwrap();
        let tr = trace_orbit(&c, &sk, 0, 0.3, 10, None).unwrap();
        assert!(tr.closed());
        assert_eq!(tr.bounce_count(), 2);
        assert!((tr.total_length - 4.0).abs() < 1e-12);
    }

    #[test]
    fn open_trace_has_no_residual() {
        let r = BoundaryCurve::rectangle(2.0, 1.0).unwrap();
        let sk = build_skeleton(&r, &Bundle::on_arc(&r, 0, 1.0).unwrap(), 64)
            .unwrap()
            .closed()
            .unwrap();
        let tr = trace_orbit(&r, &sk, 0, 0.37, 50, None).unwrap();
        assert!(!tr.closed());
        assert_eq!(
            last_quantization_residual(&tr, 3.0),
            Err(Error::TraceNotClosed)
        );
    }
}
