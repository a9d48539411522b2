//! Ray bundles: one-parameter families of rays leaving a boundary arc.
//!
//! A bundle is attached to a whole arc of the boundary. Its rays leave the
//! arc at incidence `α(s)`, and a ray that has flown a distance `d` sits at
//! the point with coordinates `(d, s)`. The volume factor of those coordinates
//! is the Jacobian `J(d, s) = γ′(s) d − sin α(s)`, which vanishes on the caustic.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc as Shared;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BoundaryCurve, RayHit};

/// Number of rays shot when splitting a bundle into sub-segments.
const SPLIT_SAMPLES: usize = 257;
/// Number of rays used to validate one bundle map.
const MAP_SAMPLES: usize = 32;

/// Whether a bundle is one of the originally constructed families or the
/// time-reversed image of one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Forward,
    Associated,
}

impl Orientation {
    fn flip(self) -> Orientation {
        match self {
            Orientation::Forward => Orientation::Associated,
            Orientation::Associated => Orientation::Forward,
        }
    }
}

/// How the incidence varies along the arc.
#[derive(Clone)]
pub enum EscapeProfile {
    ConstantIncidence(f64),
    /// Incidence as a function of the global arc length `s`.
    Function(Shared<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for EscapeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EscapeProfile::ConstantIncidence(a) => write!(f, "ConstantIncidence({a})"),
            EscapeProfile::Function(_) => write!(f, "Function(..)"),
        }
    }
}

/// A bundle of rays leaving one arc of the boundary.
#[derive(Debug, Clone)]
pub struct Bundle {
    pub arc: usize,
    /// Start `u` of the segment in global arc length.
    pub start: f64,
    /// Segment length `l`.
    pub length: f64,
    /// Curvature `dβ/ds` of the supporting arc.
    pub curvature: f64,
    pub profile: EscapeProfile,
    pub orientation: Orientation,
}

/// Where the rays of a bundle focus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausticData {
    /// Distance along the ray to the caustic; `+∞` when there is none ahead.
    pub distance: f64,
    /// Whether the caustic point lies before the ray reaches the boundary again.
    pub inside_billiard: bool,
}

impl Bundle {
    /// Constant-incidence bundle covering the whole of arc `arc`.
    pub fn on_arc(curve: &BoundaryCurve, arc: usize, alpha: f64) -> Result<Bundle> {
        if !(alpha > 0.0 && alpha < PI) {
            return Err(Error::InvalidInput(format!(
                "incidence {alpha} outside (0, π)"
            )));
        }
        let a = curve
            .arcs
            .get(arc)
            .ok_or_else(|| Error::InvalidInput(format!("no arc {arc}")))?;
        Ok(Bundle {
            arc,
            start: a.start_s,
            length: a.length,
            curvature: a.curvature(),
            profile: EscapeProfile::ConstantIncidence(alpha),
            orientation: Orientation::Forward,
        })
    }

    /// Bundle on arc `arc` with an arbitrary incidence profile.
    pub fn with_profile(
        curve: &BoundaryCurve,
        arc: usize,
        incidence: Shared<dyn Fn(f64) -> f64 + Send + Sync>,
    ) -> Result<Bundle> {
        let mut b = Bundle::on_arc(curve, arc, PI / 2.0)?;
        b.profile = EscapeProfile::Function(incidence);
        Ok(b)
    }

    /// The constant incidence, if the profile is constant.
    pub fn constant_incidence(&self) -> Option<f64> {
        match self.profile {
            EscapeProfile::ConstantIncidence(a) => Some(a),
            EscapeProfile::Function(_) => None,
        }
    }

    pub fn incidence(&self, s: f64) -> f64 {
        match &self.profile {
            EscapeProfile::ConstantIncidence(a) => *a,
            EscapeProfile::Function(f) => f(s),
        }
    }

    /// Escape angle `γ(s) = β(s) + α(s)`.
    pub fn gamma(&self, curve: &BoundaryCurve, s: f64) -> f64 {
        curve.tangent_on_arc(self.arc, s) + self.incidence(s)
    }

    /// `dγ/ds`; exact for constant incidence, a central difference otherwise.
    pub fn gamma_prime(&self, s: f64) -> f64 {
        match &self.profile {
            EscapeProfile::ConstantIncidence(_) => self.curvature,
            EscapeProfile::Function(f) => {
                let h = 1e-6 * self.length;
                self.curvature + (f(s + h) - f(s - h)) / (2.0 * h)
            }
        }
    }

    /// `J(d, s) = γ′(s) d − sin α(s)`.
    pub fn jacobian(&self, d: f64, s: f64) -> f64 {
        self.gamma_prime(s) * d - self.incidence(s).sin()
    }

    /// Caustic distance `sin α / γ′`, mapped to `+∞` when it lies behind the ray.
    pub fn caustic_distance(&self, s: f64) -> f64 {
        let gp = self.gamma_prime(s);
        if gp > 0.0 {
            self.incidence(s).sin() / gp
        } else {
            f64::INFINITY
        }
    }

    pub fn caustic(&self, curve: &BoundaryCurve, s: f64) -> Result<CausticData> {
        let distance = self.caustic_distance(s);
        let chord = curve.shoot(&self.ray(curve, s))?.chord_length;
        Ok(CausticData {
            distance,
            inside_billiard: distance < chord,
        })
    }

    pub fn ray(&self, curve: &BoundaryCurve, s: f64) -> crate::geometry::Ray {
        crate::geometry::Ray {
            origin_s: curve.reduce(s),
            gamma: self.gamma(curve, s),
            alpha: self.incidence(s),
        }
    }

    /// The time-reversed family: incidence `α → π − α` on the same arc.
    pub fn associated(&self) -> Bundle {
        let profile = match &self.profile {
            EscapeProfile::ConstantIncidence(a) => EscapeProfile::ConstantIncidence(PI - a),
            EscapeProfile::Function(f) => {
                let f = f.clone();
                EscapeProfile::Function(Shared::new(move |s| PI - f(s)))
            }
        };
        Bundle {
            profile,
            orientation: self.orientation.flip(),
            ..self.clone()
        }
    }

    /// Same arc and same constant incidence within `1e-9`.
    pub fn same_family(&self, other: &Bundle) -> bool {
        match (self.constant_incidence(), other.constant_incidence()) {
            (Some(a), Some(b)) => self.arc == other.arc && (a - b).abs() < 1e-9,
            _ => false,
        }
    }

    /// `n` points strictly inside the segment.
    pub fn interior_samples(&self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| self.start + self.length * (i as f64 + 0.5) / n as f64)
            .collect()
    }
}

/// The boundary-to-boundary map of the part of a bundle that lands on one arc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleMap {
    /// Start of the source sub-segment in global arc length.
    pub source_start: f64,
    pub source_length: f64,
    pub target_arc: usize,
    /// Incidence of the reflected rays on the target arc.
    pub target_incidence: f64,
    /// Phase-length constant `δ = D + ∫cos α − ∫cos α′`.
    pub delta: f64,
    pub caustic_crossed: bool,
}

impl BundleMap {
    /// Whether `s` lies inside the source sub-segment.
    pub fn covers(&self, curve: &BoundaryCurve, s: f64) -> bool {
        let off = (s - self.source_start).rem_euclid(curve.total_length);
        off > 0.0 && off < self.source_length
    }

    pub fn hit(&self, curve: &BoundaryCurve, bundle: &Bundle, s: f64) -> Result<RayHit> {
        curve.shoot(&bundle.ray(curve, s))
    }

    /// Arrival arc length `h(s)`.
    pub fn h(&self, curve: &BoundaryCurve, bundle: &Bundle, s: f64) -> Result<f64> {
        Ok(self.hit(curve, bundle, s)?.arrival_s)
    }

    /// Chord length `D(s)`.
    pub fn chord(&self, curve: &BoundaryCurve, bundle: &Bundle, s: f64) -> Result<f64> {
        Ok(self.hit(curve, bundle, s)?.chord_length)
    }

    /// Signed `∂h/∂s` from `−h′ sin α′ = sin α − D γ′`.
    pub fn h_prime(&self, curve: &BoundaryCurve, bundle: &Bundle, s: f64) -> Result<f64> {
        let hit = self.hit(curve, bundle, s)?;
        Ok(h_prime_from(bundle, &hit, s))
    }

    /// `∂D/∂s` from `h′ cos α′ = cos α + D′`.
    pub fn chord_prime(&self, curve: &BoundaryCurve, bundle: &Bundle, s: f64) -> Result<f64> {
        let hit = self.hit(curve, bundle, s)?;
        let hp = h_prime_from(bundle, &hit, s);
        Ok(hp * hit.arrival_incidence.cos() - bundle.incidence(s).cos())
    }
}

fn h_prime_from(bundle: &Bundle, hit: &RayHit, s: f64) -> f64 {
    (hit.chord_length * bundle.gamma_prime(s) - bundle.incidence(s).sin())
        / hit.arrival_incidence.sin()
}

/// Offset of the arrival point on its arc, lifted continuously on a closed single-arc curve.
fn arrival_offset(curve: &BoundaryCurve, bundle: &Bundle, s: f64, hit: &RayHit) -> f64 {
    if curve.arcs.len() == 1 {
        let s_off = curve.local_offset(bundle.arc, s);
        s_off + (hit.arrival_s - s).rem_euclid(curve.total_length)
    } else {
        curve.local_offset(hit.arrival_arc, hit.arrival_s)
    }
}

/// `δ` evaluated with a single ray.
pub fn delta_at(curve: &BoundaryCurve, bundle: &Bundle, s: f64) -> Result<f64> {
    let alpha = bundle
        .constant_incidence()
        .ok_or_else(|| Error::UnsupportedBundleFamily("non-constant incidence".into()))?;
    let hit = curve.shoot(&bundle.ray(curve, s))?;
    let s_off = curve.local_offset(bundle.arc, s);
    let h_off = arrival_offset(curve, bundle, s, &hit);
    Ok(hit.chord_length + s_off * alpha.cos() - h_off * hit.arrival_incidence.cos())
}

/// Splits a constant-incidence bundle by target arc and builds one map per piece.
pub fn build_maps(curve: &BoundaryCurve, bundle: &Bundle) -> Result<Vec<BundleMap>> {
    if bundle.constant_incidence().is_none() {
        return Err(Error::UnsupportedBundleFamily(
            "non-constant incidence".into(),
        ));
    }
    let target = |off: f64| -> Result<usize> {
        Ok(curve
            .shoot(&bundle.ray(curve, bundle.start + off))?
            .arrival_arc)
    };
    let offsets: Vec<f64> = (0..SPLIT_SAMPLES)
        .map(|i| bundle.length * (i as f64 + 0.5) / SPLIT_SAMPLES as f64)
        .collect();
    let mut classified: Vec<(f64, usize)> = Vec::with_capacity(offsets.len());
    for &off in &offsets {
        match target(off) {
            Ok(arc) => classified.push((off, arc)),
            Err(Error::CornerAmbiguity { .. }) | Err(Error::Grazing { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    if classified.is_empty() {
        return Err(Error::CornerAmbiguity { s: bundle.start });
    }

    let mut pieces: Vec<(f64, f64, usize)> = Vec::new();
    let mut piece_start = 0.0;
    for w in classified.windows(2) {
        let ((lo, arc_lo), (hi, arc_hi)) = (w[0], w[1]);
        if arc_lo == arc_hi {
            continue;
        }
        let boundary = bisect_switch(lo, hi, arc_lo, &target);
        pieces.push((piece_start, boundary, arc_lo));
        piece_start = boundary;
    }
    pieces.push((piece_start, bundle.length, classified.last().unwrap().1));

    pieces
        .into_iter()
        .map(|(a, b, arc)| build_map(curve, bundle, bundle.start + a, b - a, arc))
        .collect()
}

fn bisect_switch(
    mut lo: f64,
    mut hi: f64,
    arc_lo: usize,
    target: &dyn Fn(f64) -> Result<usize>,
) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match target(mid) {
            Ok(arc) if arc == arc_lo => lo = mid,
            Ok(_) => hi = mid,
            Err(_) => return mid,
        }
    }
    0.5 * (lo + hi)
}

/// Builds and validates the map of the sub-segment `(start, start + length)`.
pub fn build_map(
    curve: &BoundaryCurve,
    bundle: &Bundle,
    start: f64,
    length: f64,
    target_arc: usize,
) -> Result<BundleMap> {
    let alpha = bundle
        .constant_incidence()
        .ok_or_else(|| Error::UnsupportedBundleFamily("non-constant incidence".into()))?;
    let mut deltas = Vec::with_capacity(MAP_SAMPLES);
    let mut incidences = Vec::with_capacity(MAP_SAMPLES);
    let mut crossed = None;
    for i in 0..MAP_SAMPLES {
        let s = start + length * (i as f64 + 0.5) / MAP_SAMPLES as f64;
        let hit = curve.shoot(&bundle.ray(curve, s))?;
        if hit.arrival_arc != target_arc {
            continue;
        }
        let s_off = curve.local_offset(bundle.arc, s);
        let h_off = arrival_offset(curve, bundle, s, &hit);
        deltas.push(hit.chord_length + s_off * alpha.cos() - h_off * hit.arrival_incidence.cos());
        incidences.push(hit.arrival_incidence);
        if crossed.is_none() && i >= MAP_SAMPLES / 2 {
            let k = bundle.caustic_distance(s);
            crossed = Some(k > 0.0 && k < hit.chord_length);
        }
    }
    if deltas.len() < 8 {
        return Err(Error::CornerAmbiguity { s: start });
    }
    let spread = |v: &[f64]| {
        let (lo, hi) = v
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| {
                (l.min(x), h.max(x))
            });
        hi - lo
    };
    if spread(&incidences) > 1e-9 {
        return Err(Error::NonConstantIncidence);
    }
    let delta = deltas.iter().sum::<f64>() / deltas.len() as f64;
    let ds = spread(&deltas);
    if ds > 1e-9 * (1.0 + delta.abs()) {
        return Err(Error::DeltaNotConstant { spread: ds });
    }
    let target_incidence = incidences.iter().sum::<f64>() / incidences.len() as f64;
    Ok(BundleMap {
        source_start: start,
        source_length: length,
        target_arc,
        target_incidence,
        delta,
        caustic_crossed: crossed.unwrap_or(false),
    })
}
