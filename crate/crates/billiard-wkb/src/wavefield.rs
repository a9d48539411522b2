//! Semiclassical wave functions on grids and the scar profile of the stadium.
//!
//! Each mode is a sum of bundle waves `|J|^{-1/2} e^{σiλp(d + ∫cos α)} χ`.
//! Nodes outside every bundle domain carry exactly zero, and nodes within
//! `1e-6` of a caustic or focal line are masked instead of evaluated.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BoundaryCurve, CurveKind};
use crate::quantize::{seam_amplitude_ratio, Axis, QuantumNumbers, SpectrumEntry};
use crate::transport::{circle_energy_series, ChiSeries, Signature};

const SINGULAR_MASK: f64 = 1e-6;

/// Regular Cartesian grid; `bbox` is `[xmin, ymin, xmax, ymax]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub bbox: [f64; 4],
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, bbox: [f64; 4]) -> GridSpec {
        GridSpec { nx, ny, bbox }
    }

    /// Square `n × n` grid over the bounding box of `curve`.
    pub fn covering(curve: &BoundaryCurve, n: usize) -> GridSpec {
        GridSpec::new(n, n, curve.bounding_box())
    }

    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        let fx = if self.nx > 1 {
            i as f64 / (self.nx - 1) as f64
        } else {
            0.5
        };
        let fy = if self.ny > 1 {
            j as f64 / (self.ny - 1) as f64
        } else {
            0.5
        };
        (
            self.bbox[0] + fx * (self.bbox[2] - self.bbox[0]),
            self.bbox[1] + fy * (self.bbox[3] - self.bbox[1]),
        )
    }
}

/// Value of a mode at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeValue {
    pub inside: bool,
    pub allowed: bool,
    pub value: Complex64,
}

impl NodeValue {
    fn outside() -> NodeValue {
        NodeValue {
            inside: false,
            allowed: false,
            value: Complex64::new(0.0, 0.0),
        }
    }

    fn forbidden() -> NodeValue {
        NodeValue {
            inside: true,
            allowed: false,
            value: Complex64::new(0.0, 0.0),
        }
    }

    fn allowed(value: Complex64) -> NodeValue {
        NodeValue {
            inside: true,
            allowed: true,
            value,
        }
    }
}

/// A mode that can be evaluated pointwise.
pub trait ModeField: Sync {
    fn sample(&self, x: f64, y: f64) -> NodeValue;
}

/// Sampled field, stored row-major with `x` varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub spec: GridSpec,
    pub values: Vec<Complex64>,
    pub inside: Vec<bool>,
    pub allowed: Vec<bool>,
    /// Largest deviation from an independent reference, when one exists.
    pub reference_deviation: Option<f64>,
}

impl FieldGrid {
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.spec.nx + i
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.index(i, j)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Evaluates `field` on every node in parallel.
pub fn fill(field: &dyn ModeField, spec: &GridSpec) -> FieldGrid {
    let rows: Vec<Vec<NodeValue>> = (0..spec.ny)
        .into_par_iter()
        .map(|j| {
            (0..spec.nx)
                .map(|i| {
                    let (x, y) = spec.node(i, j);
                    field.sample(x, y)
                })
                .collect()
        })
        .collect();
    let nodes: Vec<NodeValue> = rows.into_iter().flatten().collect();
    FieldGrid {
        spec: *spec,
        values: nodes.iter().map(|n| n.value).collect(),
        inside: nodes.iter().map(|n| n.inside).collect(),
        allowed: nodes.iter().map(|n| n.allowed).collect(),
        reference_deviation: None,
    }
}

/// Circle mode built on the single bundle of incidence `α`, `cos α = |m|/λp`.
#[derive(Debug, Clone)]
pub struct CircleMode {
    pub m: i64,
    pub lambda: f64,
    pub lambda_p: f64,
    pub alpha: f64,
    pub chi: ChiSeries,
}

impl CircleMode {
    /// Mode of `entry` carrying `order` corrections; `m < 0` selects the
    /// signature `−` partner.
    pub fn new(entry: &SpectrumEntry, m: i64, order: usize) -> Result<CircleMode> {
        match entry.quantum {
            QuantumNumbers::Circle { m: em, .. } if em == m.abs() => {}
            _ => {
                return Err(Error::InvalidInput(
                    "entry is not the circle level of |m|".into(),
                ))
            }
        }
        let sigma = if m < 0 {
            Signature::Minus
        } else {
            Signature::Plus
        };
        let p = (2.0 * entry.e0).sqrt();
        let (_, chi) = circle_energy_series(entry.alpha, 1.0, p, order, sigma);
        Ok(CircleMode {
            m,
            lambda: entry.lambda,
            lambda_p: entry.wavenumber(),
            alpha: entry.alpha,
            chi,
        })
    }

    fn sigma(&self) -> f64 {
        self.chi.signature.value()
    }
}

impl ModeField for CircleMode {
    fn sample(&self, x: f64, y: f64) -> NodeValue {
        let r = x.hypot(y);
        if r > 1.0 + 1e-12 {
            return NodeValue::outside();
        }
        let r = r.min(1.0);
        let c = self.alpha.cos();
        if r <= c || (r - c).abs() < SINGULAR_MASK {
            return NodeValue::forbidden();
        }
        let phi = y.atan2(x);
        let w = (r * r - c * c).sqrt();
        let phi0 = (c / r).clamp(-1.0, 1.0).acos();
        let sa = self.alpha.sin();
        let (d1, s1) = (sa - w, phi + phi0 - self.alpha);
        let (d2, s2) = (sa + w, phi - phi0 - self.alpha);
        let sigma = self.sigma();
        let m = self.m.unsigned_abs() as f64;
        let wave = |d: f64, s: f64| -> Complex64 {
            let chi = self.chi.sum(d, self.lambda).unwrap_or_default();
            Complex64::from_polar(1.0, sigma * (self.lambda_p * d + m * s)) * chi
        };
        let eta = Complex64::new(0.0, -sigma);
        NodeValue::allowed((wave(d1, s1) + eta * wave(d2, s2)) / w.sqrt())
    }
}

/// Field of a circle level; `m < 0` gives the conjugate partner.
pub fn circle_field(
    entry: &SpectrumEntry,
    m: i64,
    order: usize,
    spec: &GridSpec,
) -> Result<FieldGrid> {
    Ok(fill(&CircleMode::new(entry, m, order)?, spec))
}

/// Rectangle mode as the interference of four plane-wave bundles.
#[derive(Debug, Clone)]
pub struct RectangleMode {
    pub a: f64,
    pub b: f64,
    pub lambda_p: f64,
    pub alpha: f64,
}

impl RectangleMode {
    pub fn new(entry: &SpectrumEntry, a: f64, b: f64) -> RectangleMode {
        RectangleMode {
            a,
            b,
            lambda_p: entry.wavenumber(),
            alpha: entry.alpha,
        }
    }

    /// Directions of the four families with their χ values.
    fn families(&self) -> [(f64, f64); 4] {
        let al = self.alpha;
        [(al, 1.0), (PI - al, -1.0), (PI + al, 1.0), (-al, -1.0)]
    }

    /// One family's wave at `(x, y)` from its bundle coordinates: the ray is
    /// traced back to the side it left, at distance `d` from point `q`.
    fn family_wave(&self, theta: f64, chi: f64, x: f64, y: f64) -> Complex64 {
        let e = [theta.cos(), theta.sin()];
        let mut d = f64::INFINITY;
        if e[0] > 1e-15 {
            d = d.min(x / e[0]);
        } else if e[0] < -1e-15 {
            d = d.min((x - self.a) / e[0]);
        }
        if e[1] > 1e-15 {
            d = d.min(y / e[1]);
        } else if e[1] < -1e-15 {
            d = d.min((y - self.b) / e[1]);
        }
        let q = [x - d * e[0], y - d * e[1]];
        // Side the ray left from, its start corner and tangent angle.
        let tol = 1e-12 * (self.a + self.b);
        let (corner, beta) = if q[1].abs() <= tol && e[1] > 0.0 {
            ([0.0, 0.0], 0.0)
        } else if (q[0] - self.a).abs() <= tol && e[0] < 0.0 {
            ([self.a, 0.0], PI / 2.0)
        } else if (q[1] - self.b).abs() <= tol && e[1] < 0.0 {
            ([self.a, self.b], PI)
        } else {
            ([0.0, self.b], 3.0 * PI / 2.0)
        };
        let incidence = (theta - beta).rem_euclid(2.0 * PI);
        let along = (q[0] - corner[0]).hypot(q[1] - corner[1]);
        let gauge = e[0] * corner[0] + e[1] * corner[1];
        let phase = self.lambda_p * (gauge + along * incidence.cos() + d);
        Complex64::from_polar(chi, phase)
    }

    /// `−4 sin(λp_x x) sin(λp_y y)`.
    pub fn product(&self, x: f64, y: f64) -> f64 {
        let (kx, ky) = (
            self.lambda_p * self.alpha.cos(),
            self.lambda_p * self.alpha.sin(),
        );
        -4.0 * (kx * x).sin() * (ky * y).sin()
    }
}

impl ModeField for RectangleMode {
    fn sample(&self, x: f64, y: f64) -> NodeValue {
        let tol = 1e-12;
        if x < -tol || y < -tol || x > self.a + tol || y > self.b + tol {
            return NodeValue::outside();
        }
        let (x, y) = (x.clamp(0.0, self.a), y.clamp(0.0, self.b));
        let v = self
            .families()
            .iter()
            .map(|&(theta, chi)| self.family_wave(theta, chi, x, y))
            .sum();
        NodeValue::allowed(v)
    }
}

/// Rectangle field with the pointwise deviation from the product form recorded.
pub fn rectangle_field(entry: &SpectrumEntry, a: f64, b: f64, spec: &GridSpec) -> FieldGrid {
    let mode = RectangleMode::new(entry, a, b);
    let mut grid = fill(&mode, spec);
    let mut dev = 0.0f64;
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            let k = grid.index(i, j);
            if grid.inside[k] {
                let (x, y) = spec.node(i, j);
                dev = dev.max((grid.values[k] - mode.product(x, y)).norm());
            }
        }
    }
    grid.reference_deviation = Some(dev);
    grid
}

/// One rectangular domain carrying a bouncing mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BouncingPiece {
    /// `[xmin, ymin, xmax, ymax]`.
    pub rect: [f64; 4],
    pub amplitude: f64,
    /// Transverse coordinate origin and direction: `χ = A sin(k_t (t − t₀) · dir)`.
    pub transverse_origin: f64,
    pub transverse_dir: f64,
}

/// Bouncing-ball mode on one or more rectangular pieces.
#[derive(Debug, Clone)]
pub struct BouncingMode {
    pub curve: BoundaryCurve,
    pub axis: Axis,
    pub lambda_p: f64,
    pub transverse_k: f64,
    pub pieces: Vec<BouncingPiece>,
}

impl BouncingMode {
    /// Mode of `entry` on `curve`: the whole rectangle, the stadium core or
    /// the two pieces of a broken rectangle.
    pub fn new(entry: &SpectrumEntry, curve: &BoundaryCurve, axis: Axis) -> Result<BouncingMode> {
        let transverse_k = (2.0 * entry.e1).sqrt();
        let lambda_p = entry.wavenumber();
        let piece = |rect: [f64; 4], amplitude: f64, t0: f64, dir: f64| BouncingPiece {
            rect,
            amplitude,
            transverse_origin: t0,
            transverse_dir: dir,
        };
        let pieces = match (&curve.kind, axis) {
            (CurveKind::Rectangle { a, b }, Axis::Vertical) => vec![piece([0.0, 0.0, *a, *b], 1.0, 0.0, 1.0)],
            (CurveKind::Rectangle { a, b }, Axis::Horizontal) => vec![piece([0.0, 0.0, *a, *b], 1.0, 0.0, 1.0)],
            (CurveKind::Stadium { a }, Axis::Vertical) => vec![piece([0.0, 0.0, *a, 2.0], 1.0, 0.0, 1.0)],
            (CurveKind::BrokenRectangle { b, a_prime, b_prime }, Axis::Vertical) => {
                let l = match entry.quantum {
                    QuantumNumbers::Broken { n0, n, .. } => n0 * n,
                    _ => return Err(Error::InvalidInput("entry is not a broken-rectangle level".into())),
                };
                let (b, ap, bp) = (b.to_f64(), a_prime.to_f64(), b_prime.to_f64());
                let mut v = vec![piece([0.0, 0.0, ap, b], 1.0, 0.0, 1.0)];
                if ap < 1.0 {
                    v.push(piece([ap, 0.0, 1.0, bp], seam_amplitude_ratio(l), 1.0, -1.0));
                }
                v
            }
            _ => {
                return Err(Error::UnsupportedBundleFamily(
                    "bouncing modes need a rectangle, a stadium or a broken rectangle with vertical rays".into(),
                ))
            }
        };
        Ok(BouncingMode {
            curve: curve.clone(),
            axis,
            lambda_p,
            transverse_k,
            pieces,
        })
    }
}

impl BouncingMode {
    /// Value of piece `k`'s formula at `(x, y)`, whether or not the point lies in it.
    pub fn piece_value(&self, k: usize, x: f64, y: f64) -> Complex64 {
        let p = &self.pieces[k];
        let (along, along0, along1, across) = match self.axis {
            Axis::Vertical => (y, p.rect[1], p.rect[3], x),
            Axis::Horizontal => (x, p.rect[0], p.rect[2], y),
        };
        let chi = p.amplitude
            * (self.transverse_k * (across - p.transverse_origin) * p.transverse_dir).sin();
        let length = along1 - along0;
        let up = Complex64::from_polar(1.0, self.lambda_p * (along - along0));
        // The returning family is the outgoing one reflected once: −e^{iλpL}.
        let back = -Complex64::from_polar(1.0, self.lambda_p * length)
            * Complex64::from_polar(1.0, self.lambda_p * (along1 - along));
        (up + back) * chi
    }
}

impl ModeField for BouncingMode {
    fn sample(&self, x: f64, y: f64) -> NodeValue {
        if !self.curve.contains(x, y) {
            return NodeValue::outside();
        }
        let tol = 1e-12;
        // On a shared edge the first piece wins; both sides agree there.
        let Some(k) = self.pieces.iter().position(|p| {
            x >= p.rect[0] - tol
                && x <= p.rect[2] + tol
                && y >= p.rect[1] - tol
                && y <= p.rect[3] + tol
        }) else {
            return NodeValue::forbidden();
        };
        NodeValue::allowed(self.piece_value(k, x, y))
    }
}

/// Bouncing-mode field of `entry` on `curve`.
pub fn bouncing_field(
    entry: &SpectrumEntry,
    curve: &BoundaryCurve,
    axis: Axis,
    spec: &GridSpec,
) -> Result<FieldGrid> {
    Ok(fill(&BouncingMode::new(entry, curve, axis)?, spec))
}

/// `(z)^{-1/2}` with `arg z = π` for negative `z`.
fn focal_root(z: f64) -> Complex64 {
    if z > 0.0 {
        Complex64::new(z.powf(-0.5), 0.0)
    } else {
        Complex64::new(0.0, -(-z).powf(-0.5))
    }
}

/// Samples of the regular scarring part along the horizontal orbit `y = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScarProfile {
    pub a: f64,
    pub lambda_p: f64,
    pub chi0: Complex64,
    pub q: f64,
    pub xs: Vec<f64>,
    pub values: Vec<Complex64>,
    /// `|1 − q² e^{2iλp(a+2)}|^{-1}`.
    pub resonance_factor: f64,
    /// Values at the orbit ends `x = −1` and `x = a + 1`, which do not vanish.
    pub endpoint_values: [Complex64; 2],
}

fn scar_check(a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) {
        return Err(Error::InvalidInput(format!("flat length {a}")));
    }
    if x < -1.0 - 1e-12 || x > a + 1.0 + 1e-12 {
        return Err(Error::InvalidInput(format!("x = {x} outside [−1, a + 1]")));
    }
    if (x + 0.5).abs() < SINGULAR_MASK || (x - a - 0.5).abs() < SINGULAR_MASK {
        return Err(Error::SampleAtFocalPoint { x });
    }
    Ok(())
}

fn scar_bracket(a: f64, lambda_p: f64, x: f64, q: f64) -> Complex64 {
    let phase = lambda_p * (a - x + 1.0);
    focal_root(2.0 * x + 1.0) * Complex64::from_polar(1.0, -phase)
        - focal_root(2.0 * (a - x) + 1.0) * q * Complex64::from_polar(1.0, phase)
}

/// `q = (2a + 3)^{-1/2}`.
pub fn scar_q(a: f64) -> f64 {
    (2.0 * a + 3.0).powf(-0.5)
}

fn scar_value(a: f64, lambda_p: f64, chi0: Complex64, x: f64) -> Complex64 {
    let q = scar_q(a);
    let theta = lambda_p * (a + 2.0);
    let lead =
        Complex64::from_polar(1.0, theta) / (1.0 - q * q * Complex64::from_polar(1.0, 2.0 * theta));
    lead * scar_bracket(a, lambda_p, x, q) * chi0
}

/// Closed-form scar profile at the sample points `xs`.
pub fn scar_profile(a: f64, lambda_p: f64, chi0: Complex64, xs: &[f64]) -> Result<ScarProfile> {
    for &x in xs {
        scar_check(a, x)?;
    }
    let q = scar_q(a);
    let theta = lambda_p * (a + 2.0);
    Ok(ScarProfile {
        a,
        lambda_p,
        chi0,
        q,
        xs: xs.to_vec(),
        values: xs
            .iter()
            .map(|&x| scar_value(a, lambda_p, chi0, x))
            .collect(),
        resonance_factor: 1.0 / (1.0 - q * q * Complex64::from_polar(1.0, 2.0 * theta)).norm(),
        endpoint_values: [
            scar_value(a, lambda_p, chi0, -1.0),
            scar_value(a, lambda_p, chi0, a + 1.0),
        ],
    })
}

/// The first `n_bounces` round-trip contributions summed explicitly; each
/// further round trip is weakened by `q²` and shifted by `2λp(a + 2)`.
pub fn multi_bounce_scar_sum(
    a: f64,
    lambda_p: f64,
    chi0: Complex64,
    x: f64,
    n_bounces: usize,
) -> Result<Complex64> {
    multi_bounce_with_q(a, lambda_p, chi0, x, n_bounces, scar_q(a))
}

/// Same sum with an explicit weakening factor `q`.
pub fn multi_bounce_with_q(
    a: f64,
    lambda_p: f64,
    chi0: Complex64,
    x: f64,
    n_bounces: usize,
    q: f64,
) -> Result<Complex64> {
    scar_check(a, x)?;
    if n_bounces == 0 {
        return Err(Error::InvalidInput("need at least one bounce".into()));
    }
    let theta = lambda_p * (a + 2.0);
    let bracket = scar_bracket(a, lambda_p, x, q) * chi0;
    let step = q * q * Complex64::from_polar(1.0, 2.0 * theta);
    let mut weight = Complex64::from_polar(1.0, theta);
    let mut sum = Complex64::new(0.0, 0.0);
    for _ in 0..n_bounces {
        sum += weight * bracket;
        weight *= step;
    }
    Ok(sum)
}
