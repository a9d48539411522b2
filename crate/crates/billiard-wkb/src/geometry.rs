//! Piecewise-smooth billiard boundaries parametrized by arc length.
//!
//! Every curve is traversed anticlockwise, so the billiard interior lies to
//! the left of the unit tangent `(cos β, sin β)`. Rays are described by their
//! incidence `α ∈ (0, π)` measured from the tangent, and their escape angle is
//! `γ = β + α`.

use std::f64::consts::{PI, TAU};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Relative distance from a junction under which a hit counts as a corner hit.
const CORNER_TOL: f64 = 1e-10;
/// Hits with `|sin α'|` below this are grazing.
const GRAZING_TOL: f64 = 1e-12;

/// An exact rational number as it appears in billiard specifications.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational { num, den }
    }

    pub fn to_ratio(self) -> Result<Ratio<i64>> {
        if self.den == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Ratio::new(self.num, self.den))
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl From<Ratio<i64>> for Rational {
    fn from(r: Ratio<i64>) -> Self {
        Rational::new(*r.numer(), *r.denom())
    }
}

/// The family a boundary belongs to, with its defining parameters.
///
/// This is also the JSON billiard specification, e.g.
/// `{"kind": "rectangle", "a": 2.0, "b": 1.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveKind {
    /// Circle of the given radius centred at the origin; `s = 0` at `(R, 0)`.
    Circle { radius: f64 },
    /// `[0, a] × [0, b]`, starting at the corner `(0, 0)`.
    Rectangle { a: f64, b: f64 },
    /// Unit-width rectangle of height `b` with the corner bay
    /// `(a', 1] × (b', b]` removed.
    BrokenRectangle {
        b: Rational,
        a_prime: Rational,
        b_prime: Rational,
    },
    /// Simple polygon with anticlockwise vertices.
    Polygon { vertices: Vec<Point> },
    /// Flats of length `a` at `y = 0` and `y = 2`, caps of radius 1 centred
    /// at `(0, 1)` and `(a, 1)` bulging outward.
    Stadium { a: f64 },
    /// Same flats with the caps bulging inward; needs `a > 2`.
    AntiStadium { a: f64 },
}

/// Shape of one smooth piece of the boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum ArcShape {
    Segment {
        start: Point,
        end: Point,
    },
    /// `sweep` is signed: positive for anticlockwise traversal about the centre.
    CircularArc {
        center: Point,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
}

/// One smooth arc with its place in the global arc-length coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub shape: ArcShape,
    pub start_s: f64,
    pub length: f64,
}

impl Arc {
    fn segment(start: Point, end: Point, start_s: f64) -> Arc {
        let length = (end[0] - start[0]).hypot(end[1] - start[1]);
        Arc {
            shape: ArcShape::Segment { start, end },
            start_s,
            length,
        }
    }

    fn circular(center: Point, radius: f64, start_angle: f64, sweep: f64, start_s: f64) -> Arc {
        Arc {
            shape: ArcShape::CircularArc {
                center,
                radius,
                start_angle,
                sweep,
            },
            start_s,
            length: radius * sweep.abs(),
        }
    }

    /// Position at local arc length `t ∈ [0, length]`.
    pub fn local_position(&self, t: f64) -> Point {
        match self.shape {
            ArcShape::Segment { start, end } => {
                let f = t / self.length;
                [
                    start[0] + f * (end[0] - start[0]),
                    start[1] + f * (end[1] - start[1]),
                ]
            }
            ArcShape::CircularArc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let phi = start_angle + sweep.signum() * t / radius;
                [
                    center[0] + radius * phi.cos(),
                    center[1] + radius * phi.sin(),
                ]
            }
        }
    }

    /// Tangent angle at local arc length `t`.
    pub fn local_tangent(&self, t: f64) -> f64 {
        match self.shape {
            ArcShape::Segment { start, end } => (end[1] - start[1]).atan2(end[0] - start[0]),
            ArcShape::CircularArc {
                radius,
                start_angle,
                sweep,
                ..
            } => {
                let sign = sweep.signum();
                start_angle + sign * t / radius + sign * PI / 2.0
            }
        }
    }

    /// Signed curvature `dβ/ds`; positive when the arc bends towards the interior.
    pub fn curvature(&self) -> f64 {
        match self.shape {
            ArcShape::Segment { .. } => 0.0,
            ArcShape::CircularArc { radius, sweep, .. } => sweep.signum() / radius,
        }
    }
}

/// Tangent angle together with a flag set when `s` sits on a corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentSample {
    pub beta: f64,
    pub discontinuous: bool,
}

/// A ray leaving the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub origin_s: f64,
    pub gamma: f64,
    pub alpha: f64,
}

/// First boundary point reached by a ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayHit {
    pub arrival_s: f64,
    pub arrival_arc: usize,
    pub chord_length: f64,
    /// Incidence of the reflected ray at the arrival point.
    pub arrival_incidence: f64,
    pub arrival_point: Point,
}

/// A closed piecewise-smooth boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub kind: CurveKind,
    pub arcs: Vec<Arc>,
    pub total_length: f64,
}

/// Mirror reflection of an incidence angle.
pub fn reflect(alpha: f64) -> f64 {
    PI - alpha
}

impl BoundaryCurve {
    pub fn from_kind(kind: CurveKind) -> Result<BoundaryCurve> {
        match kind {
            CurveKind::Circle { radius } => BoundaryCurve::circle(radius),
            CurveKind::Rectangle { a, b } => BoundaryCurve::rectangle(a, b),
            CurveKind::BrokenRectangle {
                b,
                a_prime,
                b_prime,
            } => BoundaryCurve::broken_rectangle(b, a_prime, b_prime),
            CurveKind::Polygon { vertices } => BoundaryCurve::polygon(vertices),
            CurveKind::Stadium { a } => BoundaryCurve::stadium(a),
            CurveKind::AntiStadium { a } => BoundaryCurve::anti_stadium(a),
        }
    }

    /// Parses a JSON billiard specification.
    pub fn from_json(text: &str) -> Result<BoundaryCurve> {
        let kind: CurveKind =
            serde_json::from_str(text).map_err(|e| Error::InvalidBoundary(e.to_string()))?;
        BoundaryCurve::from_kind(kind)
    }

    pub fn circle(radius: f64) -> Result<BoundaryCurve> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidBoundary(format!("radius {radius}")));
        }
        let arc = Arc::circular([0.0, 0.0], radius, 0.0, TAU, 0.0);
        BoundaryCurve::assemble(CurveKind::Circle { radius }, vec![arc])
    }

    pub fn rectangle(a: f64, b: f64) -> Result<BoundaryCurve> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidBoundary(format!("sides {a} × {b}")));
        }
        let arcs = polygon_arcs(&[[0.0, 0.0], [a, 0.0], [a, b], [0.0, b]]);
        BoundaryCurve::assemble(CurveKind::Rectangle { a, b }, arcs)
    }

    pub fn broken_rectangle(
        b: Rational,
        a_prime: Rational,
        b_prime: Rational,
    ) -> Result<BoundaryCurve> {
        let (rb, ra, rbp) = (b.to_ratio()?, a_prime.to_ratio()?, b_prime.to_ratio()?);
        let zero = Ratio::from_integer(0);
        let one = Ratio::from_integer(1);
        if rb <= zero || ra <= zero || ra > one || rbp <= zero || rbp > rb {
            return Err(Error::InvalidBoundary(
                "broken rectangle needs 0 < a' ≤ 1, 0 < b' ≤ b".into(),
            ));
        }
        let (bf, af, bpf) = (b.to_f64(), a_prime.to_f64(), b_prime.to_f64());
        let raw = [
            [0.0, 0.0],
            [1.0, 0.0],
            [1.0, bpf],
            [af, bpf],
            [af, bf],
            [0.0, bf],
        ];
        let vertices = clean_vertices(&raw);
        let arcs = polygon_arcs(&vertices);
        BoundaryCurve::assemble(
            CurveKind::BrokenRectangle {
                b,
                a_prime,
                b_prime,
            },
            arcs,
        )
    }

    pub fn polygon(vertices: Vec<Point>) -> Result<BoundaryCurve> {
        let cleaned = clean_vertices(&vertices);
        if cleaned.len() < 3 {
            return Err(Error::InvalidBoundary(
                "polygon needs three distinct vertices".into(),
            ));
        }
        if signed_area(&cleaned) <= 0.0 {
            return Err(Error::InvalidBoundary(
                "polygon vertices must be anticlockwise".into(),
            ));
        }
        let arcs = polygon_arcs(&cleaned);
        BoundaryCurve::assemble(CurveKind::Polygon { vertices }, arcs)
    }

    pub fn stadium(a: f64) -> Result<BoundaryCurve> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidBoundary(format!("flat length {a}")));
        }
        let mut arcs = Vec::with_capacity(4);
        let mut s = 0.0;
        for arc in [
            Arc::segment([0.0, 0.0], [a, 0.0], 0.0),
            Arc::circular([a, 1.0], 1.0, -PI / 2.0, PI, 0.0),
            Arc::segment([a, 2.0], [0.0, 2.0], 0.0),
            Arc::circular([0.0, 1.0], 1.0, PI / 2.0, PI, 0.0),
        ] {
            let length = arc.length;
            arcs.push(Arc { start_s: s, ..arc });
            s += length;
        }
        BoundaryCurve::assemble(CurveKind::Stadium { a }, arcs)
    }

    pub fn anti_stadium(a: f64) -> Result<BoundaryCurve> {
        if !(a > 2.0 && a.is_finite()) {
            return Err(Error::InvalidBoundary(format!(
                "anti-stadium needs a > 2, got {a}"
            )));
        }
        let mut arcs = Vec::with_capacity(4);
        let mut s = 0.0;
        for arc in [
            Arc::segment([0.0, 0.0], [a, 0.0], 0.0),
            Arc::circular([a, 1.0], 1.0, -PI / 2.0, -PI, 0.0),
            Arc::segment([a, 2.0], [0.0, 2.0], 0.0),
            Arc::circular([0.0, 1.0], 1.0, PI / 2.0, -PI, 0.0),
        ] {
            let length = arc.length;
            arcs.push(Arc { start_s: s, ..arc });
            s += length;
        }
        BoundaryCurve::assemble(CurveKind::AntiStadium { a }, arcs)
    }

    fn assemble(kind: CurveKind, arcs: Vec<Arc>) -> Result<BoundaryCurve> {
        let total_length: f64 = arcs.iter().map(|a| a.length).sum();
        for (i, arc) in arcs.iter().enumerate() {
            if arc.length <= 0.0 {
                return Err(Error::InvalidBoundary(format!("arc {i} has zero length")));
            }
            let next = &arcs[(i + 1) % arcs.len()];
            let end = arc.local_position(arc.length);
            let start = next.local_position(0.0);
            if (end[0] - start[0]).hypot(end[1] - start[1]) > 1e-9 * total_length.max(1.0) {
                return Err(Error::InvalidBoundary(format!(
                    "arc {i} does not meet its successor"
                )));
            }
        }
        Ok(BoundaryCurve {
            kind,
            arcs,
            total_length,
        })
    }

    /// Reduces `s` to `[0, L)`.
    pub fn reduce(&self, s: f64) -> f64 {
        let r = s.rem_euclid(self.total_length);
        if r >= self.total_length {
            0.0
        } else {
            r
        }
    }

    /// Arc index and local arc length of `s`; a junction belongs to the arc it starts.
    pub fn locate(&self, s: f64) -> (usize, f64) {
        let s = self.reduce(s);
        let idx = self
            .arcs
            .partition_point(|a| a.start_s <= s)
            .saturating_sub(1);
        let t = (s - self.arcs[idx].start_s).clamp(0.0, self.arcs[idx].length);
        (idx, t)
    }

    pub fn position(&self, s: f64) -> Point {
        let (k, t) = self.locate(s);
        self.arcs[k].local_position(t)
    }

    pub fn tangent_angle(&self, s: f64) -> f64 {
        self.tangent_sample(s).beta
    }

    /// Tangent angle; on a junction returns the limit from below and flags corners.
    pub fn tangent_sample(&self, s: f64) -> TangentSample {
        let (k, t) = self.locate(s);
        if t == 0.0 {
            let prev = (k + self.arcs.len() - 1) % self.arcs.len();
            let below = self.arcs[prev].local_tangent(self.arcs[prev].length);
            let above = self.arcs[k].local_tangent(0.0);
            return TangentSample {
                beta: below,
                discontinuous: angle_gap(below, above) > 1e-9,
            };
        }
        TangentSample {
            beta: self.arcs[k].local_tangent(t),
            discontinuous: false,
        }
    }

    /// Tangent angle on a given arc at global `s`, without junction handling.
    pub fn tangent_on_arc(&self, arc: usize, s: f64) -> f64 {
        let a = &self.arcs[arc];
        a.local_tangent(self.local_offset(arc, s))
    }

    /// Arc length of `s` measured from the start of `arc`, in `[0, L)`.
    pub fn local_offset(&self, arc: usize, s: f64) -> f64 {
        (s - self.arcs[arc].start_s).rem_euclid(self.total_length)
    }

    /// Whether the junction at the start of `arc` is a corner.
    pub fn is_corner(&self, arc: usize) -> bool {
        let prev = (arc + self.arcs.len() - 1) % self.arcs.len();
        let below = self.arcs[prev].local_tangent(self.arcs[prev].length);
        let above = self.arcs[arc].local_tangent(0.0);
        angle_gap(below, above) > 1e-9
    }

    /// Ray leaving `origin_s` at incidence `alpha`.
    pub fn ray(&self, origin_s: f64, alpha: f64) -> Ray {
        let origin_s = self.reduce(origin_s);
        Ray {
            origin_s,
            gamma: self.tangent_angle(origin_s) + alpha,
            alpha,
        }
    }

    /// First intersection of a ray with the boundary, in closed form.
    pub fn shoot(&self, ray: &Ray) -> Result<RayHit> {
        if !(ray.alpha > 0.0 && ray.alpha < PI) {
            return Err(Error::InvalidInput(format!(
                "incidence {} outside (0, π)",
                ray.alpha
            )));
        }
        let (origin_arc, t0) = self.locate(ray.origin_s);
        let p = self.arcs[origin_arc].local_position(t0);
        let e = [ray.gamma.cos(), ray.gamma.sin()];
        let eps = 1e-12 * self.total_length;

        let mut best: Option<(f64, usize)> = None;
        for (j, arc) in self.arcs.iter().enumerate() {
            let hit = match arc.shape {
                ArcShape::Segment { start, end } => {
                    if j == origin_arc {
                        continue;
                    }
                    segment_hit(p, e, start, end, eps)
                }
                ArcShape::CircularArc {
                    center,
                    radius,
                    start_angle,
                    sweep,
                } => circle_hits(p, e, center, radius, j == origin_arc, eps)
                    .into_iter()
                    .filter(|&t| {
                        let q = [p[0] + t * e[0], p[1] + t * e[1]];
                        within_sweep(q, center, start_angle, sweep, radius, self.total_length)
                    })
                    .fold(None, |acc: Option<f64>, t| {
                        Some(acc.map_or(t, |a| a.min(t)))
                    }),
            };
            if let Some(t) = hit {
                if best.is_none_or(|(bt, _)| t < bt) {
                    best = Some((t, j));
                }
            }
        }
        let (dist, j) = best.ok_or(Error::NoIntersection)?;
        let q = [p[0] + dist * e[0], p[1] + dist * e[1]];
        let arc = &self.arcs[j];
        let mut t = local_parameter(arc, q);
        let tol = CORNER_TOL * self.total_length;

        if t < tol {
            if self.is_corner(j) {
                return Err(Error::CornerAmbiguity { s: arc.start_s });
            }
            t = t.max(0.0);
        } else if t > arc.length - tol {
            let next = (j + 1) % self.arcs.len();
            if self.is_corner(next) {
                return Err(Error::CornerAmbiguity {
                    s: self.arcs[next].start_s,
                });
            }
            t = t.min(arc.length);
        }
        let arrival_s = self.reduce(arc.start_s + t);
        let beta = arc.local_tangent(t);
        let incidence = (beta - ray.gamma).rem_euclid(TAU);
        if incidence.sin().abs() < GRAZING_TOL || incidence >= PI {
            return Err(Error::Grazing { s: arrival_s });
        }
        Ok(RayHit {
            arrival_s,
            arrival_arc: j,
            chord_length: dist,
            arrival_incidence: incidence,
            arrival_point: q,
        })
    }

    /// Whether a point lies in the closed billiard domain.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        const TOL: f64 = 1e-12;
        match &self.kind {
            CurveKind::Circle { radius } => x.hypot(y) <= radius + TOL,
            CurveKind::Stadium { a } => {
                let core = (-TOL..=a + TOL).contains(&x) && (-TOL..=2.0 + TOL).contains(&y);
                core || x.hypot(y - 1.0) <= 1.0 + TOL || (x - a).hypot(y - 1.0) <= 1.0 + TOL
            }
            CurveKind::AntiStadium { a } => {
                let core = (-TOL..=a + TOL).contains(&x) && (-TOL..=2.0 + TOL).contains(&y);
                core && x.hypot(y - 1.0) >= 1.0 - TOL && (x - a).hypot(y - 1.0) >= 1.0 - TOL
            }
            _ => {
                let vertices: Vec<Point> =
                    self.arcs.iter().map(|a| a.local_position(0.0)).collect();
                point_in_polygon(&vertices, [x, y], TOL)
            }
        }
    }

    /// Axis-aligned bounding box `(xmin, ymin, xmax, ymax)`.
    pub fn bounding_box(&self) -> [f64; 4] {
        let mut bb = [
            f64::INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::NEG_INFINITY,
        ];
        for arc in &self.arcs {
            let p = arc.local_position(0.0);
            bb[0] = bb[0].min(p[0]);
            bb[1] = bb[1].min(p[1]);
            bb[2] = bb[2].max(p[0]);
            bb[3] = bb[3].max(p[1]);
        }
        for arc in &self.arcs {
            if let ArcShape::CircularArc { center, radius, .. } = arc.shape {
                for (dx, dy) in [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)] {
                    let q = [center[0] + radius * dx, center[1] + radius * dy];
                    if on_arc(arc, q) {
                        bb[0] = bb[0].min(q[0]);
                        bb[1] = bb[1].min(q[1]);
                        bb[2] = bb[2].max(q[0]);
                        bb[3] = bb[3].max(q[1]);
                    }
                }
            }
        }
        bb
    }
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let (p, q) = (v[i], v[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
        / 2.0
}

/// Drops repeated vertices and vertices in the middle of straight runs.
fn clean_vertices(raw: &[Point]) -> Vec<Point> {
    let mut v: Vec<Point> = Vec::with_capacity(raw.len());
    for &p in raw {
        if v.last()
            .is_none_or(|q: &Point| (p[0] - q[0]).hypot(p[1] - q[1]) > 1e-12)
        {
            v.push(p);
        }
    }
    while v.len() > 1 {
        let (f, l) = (v[0], v[v.len() - 1]);
        if (f[0] - l[0]).hypot(f[1] - l[1]) <= 1e-12 {
            v.pop();
        } else {
            break;
        }
    }
    loop {
        let n = v.len();
        if n < 3 {
            return v;
        }
        let mut removed = false;
        for i in 0..n {
            let (a, b, c) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
            let (u, w) = ([b[0] - a[0], b[1] - a[1]], [c[0] - b[0], c[1] - b[1]]);
            let cross = u[0] * w[1] - u[1] * w[0];
            let dot = u[0] * w[0] + u[1] * w[1];
            if cross.abs() <= 1e-12 * (u[0].hypot(u[1]) * w[0].hypot(w[1])) && dot > 0.0 {
                v.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return v;
        }
    }
}

fn polygon_arcs(vertices: &[Point]) -> Vec<Arc> {
    let n = vertices.len();
    let mut arcs = Vec::with_capacity(n);
    let mut s = 0.0;
    for i in 0..n {
        let arc = Arc::segment(vertices[i], vertices[(i + 1) % n], s);
        s += arc.length;
        arcs.push(arc);
    }
    arcs
}

fn segment_hit(p: Point, e: Point, a: Point, b: Point, eps: f64) -> Option<f64> {
    let w = [b[0] - a[0], b[1] - a[1]];
    let denom = e[0] * w[1] - e[1] * w[0];
    if denom.abs() < 1e-300 {
        return None;
    }
    let ap = [a[0] - p[0], a[1] - p[1]];
    let t = (ap[0] * w[1] - ap[1] * w[0]) / denom;
    let u = (ap[0] * e[1] - ap[1] * e[0]) / denom;
    let slack = 1e-12;
    if t > eps && (-slack..=1.0 + slack).contains(&u) {
        Some(t)
    } else {
        None
    }
}

fn circle_hits(p: Point, e: Point, c: Point, r: f64, own: bool, eps: f64) -> Vec<f64> {
    let pc = [p[0] - c[0], p[1] - c[1]];
    let b = pc[0] * e[0] + pc[1] * e[1];
    if own {
        // The origin is on this circle, so one root is zero and the other is −2 b.
        let t = -2.0 * b;
        return if t > eps { vec![t] } else { vec![] };
    }
    let cterm = pc[0] * pc[0] + pc[1] * pc[1] - r * r;
    let disc = b * b - cterm;
    if disc < 0.0 {
        return vec![];
    }
    let sq = disc.sqrt();
    // Stable pair of roots of t² + 2bt + c = 0.
    let q = -(b + b.signum() * sq);
    let mut roots = Vec::with_capacity(2);
    if q != 0.0 {
        roots.push(q);
        roots.push(cterm / q);
    } else {
        roots.push(0.0);
    }
    roots.into_iter().filter(|&t| t > eps).collect()
}

fn within_sweep(q: Point, c: Point, start: f64, sweep: f64, r: f64, total: f64) -> bool {
    if sweep.abs() >= TAU {
        return true;
    }
    let phi = (q[1] - c[1]).atan2(q[0] - c[0]);
    let u = ((phi - start) * sweep.signum()).rem_euclid(TAU);
    let slack = 1e-12 * total / r;
    u <= sweep.abs() + slack || u >= TAU - slack
}

fn on_arc(arc: &Arc, q: Point) -> bool {
    match arc.shape {
        ArcShape::CircularArc {
            center,
            radius,
            start_angle,
            sweep,
        } => within_sweep(q, center, start_angle, sweep, radius, 0.0),
        ArcShape::Segment { .. } => true,
    }
}

/// Local arc length of a point known to lie on `arc`.
fn local_parameter(arc: &Arc, q: Point) -> f64 {
    match arc.shape {
        ArcShape::Segment { start, end } => {
            let w = [end[0] - start[0], end[1] - start[1]];
            ((q[0] - start[0]) * w[0] + (q[1] - start[1]) * w[1]) / arc.length
        }
        ArcShape::CircularArc {
            center,
            radius,
            start_angle,
            sweep,
        } => {
            let phi = (q[1] - center[1]).atan2(q[0] - center[0]);
            let mut u = ((phi - start_angle) * sweep.signum()).rem_euclid(TAU);
            // Points just before the start wrap to nearly 2π.
            if sweep.abs() < TAU && u > sweep.abs() && u > (sweep.abs() + TAU) / 2.0 {
                u -= TAU;
            }
            u * radius
        }
    }
}

fn point_in_polygon(v: &[Point], p: Point, tol: f64) -> bool {
    let n = v.len();
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        let w = [b[0] - a[0], b[1] - a[1]];
        let len2 = w[0] * w[0] + w[1] * w[1];
        let f = (((p[0] - a[0]) * w[0] + (p[1] - a[1]) * w[1]) / len2).clamp(0.0, 1.0);
        let d = (p[0] - a[0] - f * w[0]).hypot(p[1] - a[1] - f * w[1]);
        if d <= tol {
            return true;
        }
    }
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (v[i], v[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_position_and_tangent() {
        let c = BoundaryCurve::circle(1.0).unwrap();
        let p = c.position(0.0);
        assert!((p[0] - 1.0).abs() < 1e-15 && p[1].abs() < 1e-15);
        assert!((c.tangent_angle(0.3) - (0.3 + PI / 2.0)).abs() < 1e-15);
        assert!(!c.tangent_sample(0.0).discontinuous);
    }

    #[test]
    fn rectangle_positions() {
        let r = BoundaryCurve::rectangle(2.0, 1.0).unwrap();
        assert_eq!(r.position(2.0), [2.0, 0.0]);
        assert_eq!(r.position(2.5), [2.0, 0.5]);
        assert_eq!(r.tangent_angle(1.0), 0.0);
        assert!((r.tangent_angle(2.5) - PI / 2.0).abs() < 1e-15);
        let junction = r.tangent_sample(2.0);
        assert!(junction.discontinuous);
        assert_eq!(junction.beta, 0.0);
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(reflect(PI / 2.0), PI / 2.0);
        assert!((reflect(PI / 4.0) - 3.0 * PI / 4.0).abs() < 1e-15);
        assert!((reflect(3.0 * PI / 4.0) - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn circle_chord() {
        let c = BoundaryCurve::circle(1.0).unwrap();
        let alpha = 0.7;
        let hit = c.shoot(&c.ray(0.0, alpha)).unwrap();
        assert!((hit.chord_length - 2.0 * alpha.sin()).abs() < 1e-14);
        assert!((hit.arrival_incidence - alpha).abs() < 1e-13);
        assert!((hit.arrival_s - 2.0 * alpha).abs() < 1e-13);
    }

    #[test]
    fn square_corner_is_ambiguous() {
        let sq = BoundaryCurve::rectangle(1.0, 1.0).unwrap();
        let err = sq.shoot(&Ray {
            origin_s: 1e-3,
            gamma: PI / 4.0,
            alpha: PI / 4.0,
        });
        assert!(err.is_ok());
        let diag = sq.shoot(&sq.ray(0.5, 1f64.atan2(0.5)));
        assert!(matches!(diag, Err(Error::CornerAmbiguity { .. })));
    }

    #[test]
    fn stadium_horizontal_orbit() {
        let st = BoundaryCurve::stadium(1.0).unwrap();
        // Top of the right cap is (a + 1, 1), a quarter of the way round it.
        let s_b = 1.0 + PI / 2.0;
        let p = st.position(s_b);
        assert!((p[0] - 2.0).abs() < 1e-14 && (p[1] - 1.0).abs() < 1e-14);
        let hit = st.shoot(&st.ray(s_b, PI / 2.0)).unwrap();
        assert!((hit.chord_length - 3.0).abs() < 1e-13);
        assert!((hit.arrival_point[0] + 1.0).abs() < 1e-13);
    }

    #[test]
    fn broken_rectangle_zero_bay_is_rectangle() {
        let one = Rational::new(1, 1);
        let br = BoundaryCurve::broken_rectangle(one, one, one).unwrap();
        assert_eq!(br.arcs.len(), 4);
        assert!((br.total_length - 4.0).abs() < 1e-15);
    }

    #[test]
    fn containment() {
        let half = Rational::new(1, 2);
        let br = BoundaryCurve::broken_rectangle(Rational::new(1, 1), half, half).unwrap();
        assert!(br.contains(0.25, 0.75));
        assert!(br.contains(0.75, 0.25));
        assert!(!br.contains(0.75, 0.75));
        let st = BoundaryCurve::stadium(1.0).unwrap();
        assert!(st.contains(-0.5, 1.0));
        assert!(!st.contains(-0.9, 0.1));
        let anti = BoundaryCurve::anti_stadium(3.0).unwrap();
        assert!(!anti.contains(0.5, 1.0));
        assert!(anti.contains(1.5, 1.0));
    }

    #[test]
    fn json_spec() {
        let c = BoundaryCurve::from_json(r#"{"kind": "rectangle", "a": 2.0, "b": 1.0}"#).unwrap();
        assert!((c.total_length - 6.0).abs() < 1e-15);
        let b = BoundaryCurve::from_json(
            r#"{"kind": "broken_rectangle", "b": {"num": 1, "den": 1},
                "a_prime": {"num": 1, "den": 2}, "b_prime": {"num": 1, "den": 2}}"#,
        )
        .unwrap();
        assert_eq!(b.arcs.len(), 6);
        assert!(BoundaryCurve::from_json(r#"{"kind": "ellipse"}"#).is_err());
    }
}
