//! Acceptance checks comparing the solvers with the independent references.

use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bundles::{build_maps, delta_at, Bundle};
use crate::error::{Error, Result};
use crate::geometry::{BoundaryCurve, Rational};
use crate::oracle::{bessel_zeros, contour_integral_e1, exact_rectangle_spectrum};
use crate::quantize::{
    bouncing_mode_spectrum, broken_rectangle_spectrum, circle_condition, circle_spectrum,
    rectangle_spectrum, Axis, CommensurateSpec, QuantumNumbers, SpectrumEntry,
};
use crate::skeleton::{build_skeleton, last_quantization_residual, trace_orbit, Closure, Skeleton};
use crate::transport::{
    circle_first_energy, reflect_chi, ChiSeries, Contour, EnergySeries, ReducedOperator, Signature,
};
use crate::wavefield::{
    fill, multi_bounce_scar_sum, rectangle_field, scar_profile, scar_q, BouncingMode, CircleMode,
    GridSpec, ModeField,
};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

fn finish(id: u32, name: &str, outcome: Result<(bool, String)>) -> CheckResult {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckResult {
        id,
        name: name.into(),
        passed,
        detail,
    }
}

/// Named groups of criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Circle,
    Rectangle,
    Skeleton,
    Transport,
    Bouncing,
    Broken,
    Scar,
    Fields,
}

impl Suite {
    pub const NAMES: [&'static str; 9] = [
        "all",
        "circle",
        "rectangle",
        "skeleton",
        "transport",
        "bouncing",
        "broken",
        "scar",
        "fields",
    ];

    pub fn parse(name: &str) -> Option<Suite> {
        Some(match name {
            "all" => Suite::All,
            "circle" => Suite::Circle,
            "rectangle" => Suite::Rectangle,
            "skeleton" => Suite::Skeleton,
            "transport" => Suite::Transport,
            "bouncing" => Suite::Bouncing,
            "broken" => Suite::Broken,
            "scar" => Suite::Scar,
            "fields" => Suite::Fields,
            _ => return None,
        })
    }

    /// Criteria belonging to the suite.
    pub fn criteria(self) -> Vec<u32> {
        match self {
            Suite::All => (1..=11).collect(),
            Suite::Circle => vec![2, 3, 4, 7, 11],
            Suite::Rectangle => vec![1, 4, 5, 6, 7, 11],
            Suite::Skeleton => vec![4, 5, 6],
            Suite::Transport => vec![3, 7],
            Suite::Bouncing => vec![8],
            Suite::Broken => vec![9],
            Suite::Scar => vec![10],
            Suite::Fields => vec![1, 8, 11],
        }
    }
}

/// Runs criterion `id`.
pub fn run_check(id: u32) -> Result<CheckResult> {
    Ok(match id {
        1 => check_rectangle_exactness(),
        2 => check_circle_zeroth_order(),
        3 => check_circle_first_order(),
        4 => check_quantization_residuals(),
        5 => check_skeleton_cardinalities(),
        6 => check_delta_constancy(20, 0x5eed),
        7 => check_chi_closure(),
        8 => check_bouncing_equivalence(),
        9 => check_broken_rectangle(),
        10 => check_scar_profile(),
        11 => check_field_boundaries(),
        _ => return Err(Error::InvalidInput(format!("no criterion {id}"))),
    })
}

/// Runs every criterion of `suite` in order.
pub fn run_suite(suite: Suite) -> Vec<CheckResult> {
    suite
        .criteria()
        .into_iter()
        .map(|id| run_check(id).expect("criterion ids are valid"))
        .collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn sorted_energies(levels: &[SpectrumEntry]) -> Vec<f64> {
    let mut e: Vec<f64> = levels.iter().map(|l| l.energy()).collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Rectangle levels against the separable spectrum, and the four-bundle field
/// against the product of sines.
pub fn check_rectangle_exactness() -> CheckResult {
    let start = Instant::now();
    let outcome = (|| {
        let (a, b) = (2.0, 1.0);
        let levels = rectangle_spectrum(a, b, 1.0, 10, 10)?;
        let exact = exact_rectangle_spectrum(a, b, 1.0, 10, 10);
        let mut level_err = 0.0f64;
        for (l, x) in levels.iter().zip(&exact) {
            match l.quantum {
                QuantumNumbers::Pair { n, m } if n == x.n && m == x.m => {}
                _ => {
                    return Err(Error::InvalidInput(
                        "level order differs from the reference".into(),
                    ))
                }
            }
            level_err = level_err.max((l.energy() - x.energy).abs());
        }
        let spec = GridSpec::new(101, 101, [0.0, 0.0, a, b]);
        let mut field_err = 0.0f64;
        for l in levels.iter().filter(
            |l| matches!(l.quantum, QuantumNumbers::Pair { n, m } if (n + m) % 4 == 1 || n == m),
        ) {
            let grid = rectangle_field(l, a, b, &spec);
            field_err = field_err.max(grid.reference_deviation.unwrap_or(f64::INFINITY));
        }
        let secs = start.elapsed().as_secs_f64();
        Ok((
            levels.len() == exact.len() && level_err <= 1e-12 && field_err <= 1e-12 && secs < 1.0,
            format!("{} levels, max |ΔE| = {level_err:.3e}, max field deviation = {field_err:.3e}, {secs:.3} s", levels.len()),
        ))
    })();
    finish(1, "rectangle exactness", outcome)
}

/// Zeroth-order circle wavenumbers within the McMahon-sized envelope of the
/// Bessel zeros, with errors shrinking in `r`.
pub fn check_circle_zeroth_order() -> CheckResult {
    let start = Instant::now();
    let outcome = (|| {
        let levels = circle_spectrum(1.0, 3, 20, 0)?;
        let mut ok = true;
        let mut worst_ratio = 0.0f64;
        for m in 0..=3u32 {
            let zeros = bessel_zeros(m, 20)?.zeros;
            let mut prev = f64::INFINITY;
            for (r, j) in (1..=20u32).zip(zeros) {
                let k = levels
                    .iter()
                    .find(|l| l.quantum == QuantumNumbers::Circle { m: m as i64, r })
                    .ok_or_else(|| Error::InvalidInput(format!("missing level ({m}, {r})")))?
                    .wavenumber();
                let err = (k - j).abs();
                let envelope = (4.0 * (m * m) as f64 - 1.0).abs() / (8.0 * j) * 1.5;
                worst_ratio = worst_ratio.max(err / envelope);
                ok &= err <= envelope && err < prev;
                prev = err;
            }
        }
        let secs = start.elapsed().as_secs_f64();
        Ok((
            ok && secs < 5.0,
            format!("worst error/envelope = {worst_ratio:.4}, monotone = {ok}, {secs:.3} s"),
        ))
    })();
    finish(2, "circle zeroth order vs Bessel zeros", outcome)
}

/// First-order circle energy against the contour quadrature.
pub fn check_circle_first_order() -> CheckResult {
    let outcome = (|| {
        let mut worst = 0.0f64;
        for alpha in [PI / 2.0, PI / 3.0, PI / 4.0, 1.0] {
            let integral = contour_integral_e1(alpha, 0.5)?;
            let from_quadrature = -integral / (4.0 * alpha.sin());
            worst = worst.max((from_quadrature - circle_first_energy(alpha)).norm());
        }
        let e_half = circle_first_energy(PI / 2.0);
        let magnitude_ok = (e_half.abs() - 0.125).abs() <= 1e-15;
        // Report only: the sign-flipped alternative closed form and the Bessel shift of the ground level.
        let alternative =
            |alpha: f64| (1.0 / (8.0 * alpha.sin())) * (5.0 / 6.0 / alpha.tan().powi(2) - 1.0);
        let j01 = bessel_zeros(0, 1)?.zeros[0];
        let k0 = 0.75 * PI;
        let bessel_shift = (j01 * j01 - k0 * k0) / 2.0;
        Ok((
            worst <= 1e-8 && magnitude_ok,
            format!(
                "max |E1 − quadrature| = {worst:.3e}, E1(π/2) = {e_half}; report: alternative form at π/3 = {:.6}, ours = {:.6}, \
                 Bessel shift (j² − k₀²)/2 for (0,1) = {bessel_shift:.6} vs E1 = {e_half}",
                alternative(PI / 3.0),
                circle_first_energy(PI / 3.0)
            ),
        ))
    })();
    finish(3, "circle first order", outcome)
}

/// Rectangle skeleton for the level `entry` of an `a × b` rectangle, seeded on the bottom side.
pub fn rectangle_skeleton(curve: &BoundaryCurve, entry: &SpectrumEntry) -> Result<Skeleton> {
    let seed = Bundle::on_arc(curve, 0, entry.alpha)?;
    match build_skeleton(curve, &seed, 64)? {
        Closure::Closed(sk) => Ok(sk),
        Closure::NotReached { reason, .. } => Err(Error::InvalidInput(reason)),
    }
}

/// Quantization conditions re-substituted for circle and rectangle levels.
pub fn check_quantization_residuals() -> CheckResult {
    let outcome = (|| {
        let mut circle_worst = 0.0f64;
        for l in circle_spectrum(1.0, 3, 20, 1)? {
            if let QuantumNumbers::Circle { m, r } = l.quantum {
                circle_worst =
                    circle_worst.max(circle_condition(l.wavenumber(), m as f64, r).abs());
            }
        }
        let (a, b) = (2.0, 1.0);
        let curve = BoundaryCurve::rectangle(a, b)?;
        let mut rect_worst = 0.0f64;
        let mut traced = 0;
        for l in rectangle_spectrum(a, b, 1.0, 10, 10)? {
            let sk = rectangle_skeleton(&curve, &l)?;
            let trace = trace_orbit(&curve, &sk, 0, 0.613_717, 2000, None)?;
            let res = last_quantization_residual(&trace, l.wavenumber())?;
            rect_worst = rect_worst.max(res.norm());
            traced += 1;
        }
        Ok((
            circle_worst < 1e-10 && rect_worst < 1e-10,
            format!("circle max residual = {circle_worst:.3e}, rectangle max |e^{{iθ}} − 1| = {rect_worst:.3e} over {traced} closed traces"),
        ))
    })();
    finish(4, "quantization residuals", outcome)
}

/// Bundle counts of the circle and rectangle skeletons.
pub fn check_skeleton_cardinalities() -> CheckResult {
    let outcome = (|| {
        let count = |curve: &BoundaryCurve, alpha: f64| -> Result<usize> {
            let seed = Bundle::on_arc(curve, 0, alpha)?;
            match build_skeleton(curve, &seed, 64)? {
                Closure::Closed(sk) => Ok(sk.len()),
                Closure::NotReached { reason, .. } => Err(Error::InvalidInput(reason)),
            }
        };
        let rect = BoundaryCurve::rectangle(2.0, 1.0)?;
        let circle = count(&BoundaryCurve::circle(1.0)?, 0.7)?;
        let generic = count(&rect, 1.0)?;
        let normal = count(&rect, PI / 2.0)?;
        Ok((
            (circle, generic, normal) == (1, 8, 2),
            format!("circle {circle}, rectangle at α = 1 {generic}, normal incidence {normal}"),
        ))
    })();
    finish(5, "skeleton cardinalities", outcome)
}

/// Spread of `δ` over 32 samples of every map of one bundle.
pub fn delta_spread(curve: &BoundaryCurve, bundle: &Bundle) -> Result<f64> {
    let mut worst = 0.0f64;
    for map in build_maps(curve, bundle)? {
        let values: Vec<f64> = (0..32)
            .map(|i| {
                delta_at(
                    curve,
                    bundle,
                    map.source_start + map.source_length * (i as f64 + 0.5) / 32.0,
                )
            })
            .collect::<Result<_>>()?;
        let mean = values.iter().sum::<f64>() / 32.0;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 32.0;
        worst = worst.max(var.sqrt());
    }
    Ok(worst)
}

/// `δ` is constant along each map for random circle and rectangle bundles.
pub fn check_delta_constancy(count: usize, seed: u64) -> CheckResult {
    let outcome = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for k in 0..count {
            let alpha = rng.gen_range(0.05..PI - 0.05);
            let (curve, arc) = if k % 2 == 0 {
                (BoundaryCurve::circle(rng.gen_range(0.5..2.0))?, 0)
            } else {
                (
                    BoundaryCurve::rectangle(rng.gen_range(0.5..3.0), rng.gen_range(0.5..3.0))?,
                    rng.gen_range(0..4),
                )
            };
            worst = worst.max(delta_spread(&curve, &Bundle::on_arc(&curve, arc, alpha)?)?);
        }
        Ok((
            worst < 1e-9,
            format!("{count} bundles, max stddev of δ = {worst:.3e}"),
        ))
    })();
    finish(6, "δ constancy", outcome)
}

/// Product of the reflection factors around a closed trace, starting from χ = 1.
pub fn transported_chi(
    curve: &BoundaryCurve,
    sk: &Skeleton,
    start_s: f64,
    lambda_p: f64,
    max_bounces: usize,
) -> Result<(Complex64, usize)> {
    let trace = trace_orbit(curve, sk, 0, start_s, max_bounces, None)?;
    if !trace.closed() {
        return Err(Error::TraceNotClosed);
    }
    let mut chi = vec![Complex64::new(1.0, 0.0)];
    for hit in &trace.hits {
        let bundle = &sk.bundles[hit.bundle];
        let t = sk.transitions[hit.bundle]
            .iter()
            .find(|t| t.map.covers(curve, hit.s))
            .ok_or(Error::TraceNotClosed)?;
        let h_prime = t.map.h_prime(curve, bundle, hit.s)?;
        chi = reflect_chi(&chi, &t.map, h_prime, lambda_p, Signature::Plus);
    }
    Ok((chi[0], trace.bounce_count()))
}

/// χ returns to itself around closed rectangle traces and across circle chords.
pub fn check_chi_closure() -> CheckResult {
    let outcome = (|| {
        let (a, b) = (2.0, 1.0);
        let curve = BoundaryCurve::rectangle(a, b)?;
        let level = rectangle_spectrum(a, b, 1.0, 4, 1)?
            .into_iter()
            .find(|l| l.quantum == QuantumNumbers::Pair { n: 4, m: 1 })
            .ok_or_else(|| Error::InvalidInput("missing level (4, 1)".into()))?;
        let sk = rectangle_skeleton(&curve, &level)?;
        let (chi, bounces) = transported_chi(&curve, &sk, 0.613_717, level.wavenumber(), 16)?;
        let rect_err = (chi - 1.0).norm();

        let mut circle_worst = 0.0f64;
        for alpha in [PI / 2.0, PI / 3.0, PI / 4.0, 1.0, 0.3] {
            let p = 3.0;
            let mut energy = EnergySeries::new(p * p / 2.0);
            energy
                .corrections
                .push(Complex64::new(circle_first_energy(alpha), 0.0));
            let chi = ChiSeries::zeroth(
                ReducedOperator::new(alpha, 1.0),
                p,
                Signature::Plus,
                Complex64::new(1.0, 0.0),
            );
            let chord = 2.0 * alpha.sin();
            let closed = chi
                .extend(&energy, Complex64::new(0.0, 0.0))
                .values(chord, Contour::Above)?[1];
            let quadrature = chi.next_order_by_quadrature(&energy, chord, 0.5 * alpha.sin())?;
            circle_worst = circle_worst.max(closed.norm()).max(quadrature.norm());
        }
        Ok((
            bounces == 4 && rect_err < 1e-12 && circle_worst < 1e-9,
            format!("rectangle {bounces}-bounce |χ − 1| = {rect_err:.3e}, circle max |χ₁(chord)| = {circle_worst:.3e}"),
        ))
    })();
    finish(7, "χ transport closure", outcome)
}

/// Bouncing-mode levels equal rectangle levels; the stadium bouncing field
/// vanishes on the caps and the core boundary.
pub fn check_bouncing_equivalence() -> CheckResult {
    let outcome = (|| {
        let bouncing = sorted_energies(&bouncing_mode_spectrum(PI, PI, 1.0, 8, 8, Axis::Vertical)?);
        let rect = sorted_energies(&rectangle_spectrum(PI, PI, 1.0, 8, 8)?);
        let level_err = max_abs_diff(&bouncing, &rect);

        let a = 1.0;
        let curve = BoundaryCurve::stadium(a)?;
        let mut cap_max = 0.0f64;
        let mut edge_ratio = 0.0f64;
        for entry in bouncing_mode_spectrum(a, 2.0, 1.0, 4, 3, Axis::Vertical)? {
            let mode = BouncingMode::new(&entry, &curve, Axis::Vertical)?;
            let grid = fill(&mode, &GridSpec::covering(&curve, 101));
            let mut interior = 0.0f64;
            for j in 0..grid.spec.ny {
                for i in 0..grid.spec.nx {
                    let (x, _) = grid.spec.node(i, j);
                    let k = grid.index(i, j);
                    if !grid.inside[k] {
                        continue;
                    }
                    if x < -1e-12 || x > a + 1e-12 {
                        cap_max = cap_max.max(grid.values[k].norm());
                    } else {
                        interior = interior.max(grid.values[k].norm());
                    }
                }
            }
            let mut edge = 0.0f64;
            for i in 0..=200 {
                let t = i as f64 / 200.0;
                for (x, y) in [(t * a, 0.0), (t * a, 2.0), (0.0, 2.0 * t), (a, 2.0 * t)] {
                    edge = edge.max(mode.piece_value(0, x, y).norm());
                }
            }
            edge_ratio = edge_ratio.max(edge / interior);
        }
        Ok((
            bouncing.len() == rect.len() && level_err <= 1e-12 && cap_max == 0.0 && edge_ratio < 1e-9,
            format!("max |ΔE| = {level_err:.3e}, cap max = {cap_max:e}, core boundary / interior = {edge_ratio:.3e}"),
        ))
    })();
    finish(8, "bouncing-mode equivalence", outcome)
}

/// Broken-rectangle levels, seam continuity and the zero-bay limit.
pub fn check_broken_rectangle() -> CheckResult {
    let outcome = (|| {
        let h = Rational::new(1, 2);
        let one = Rational::new(1, 1);
        let spec = CommensurateSpec::new(one, h, h)?;
        let levels = broken_rectangle_spectrum(&spec, 1.0, 6, 6)?;
        let mut level_err = 0.0f64;
        for l in &levels {
            if let QuantumNumbers::Broken { n, m, .. } = l.quantum {
                level_err =
                    level_err.max((l.energy() - 2.0 * PI * PI * ((n * n + m * m) as f64)).abs());
            }
        }
        let curve = BoundaryCurve::broken_rectangle(one, h, h)?;
        let mut seam = 0.0f64;
        for l in &levels {
            let mode = BouncingMode::new(l, &curve, Axis::Vertical)?;
            let (ap, kt) = (0.5, mode.transverse_k);
            let ratio = mode.pieces[1].amplitude;
            // Normal derivatives of the transverse factors across the seam.
            let slope_left = kt * (kt * ap).cos();
            let slope_right = -ratio * kt * (kt * (1.0 - ap)).cos();
            seam = seam.max((slope_left - slope_right).abs() / kt);
            for i in 0..=100 {
                let y = 0.5 * i as f64 / 100.0;
                seam = seam.max((mode.piece_value(0, ap, y) - mode.piece_value(1, ap, y)).norm());
            }
        }
        let mut zero_bay_err = 0.0f64;
        for (b, a_prime, b_prime) in [
            (one, one, one),
            (Rational::new(3, 2), one, Rational::new(3, 2)),
        ] {
            let zs = CommensurateSpec::new(b, a_prime, b_prime)?;
            let broken = sorted_energies(&broken_rectangle_spectrum(&zs, 1.0, 6, 6)?);
            let plain = sorted_energies(&rectangle_spectrum(1.0, b.to_f64(), 1.0, 6, 6)?);
            zero_bay_err = zero_bay_err.max(max_abs_diff(&broken, &plain));
        }
        Ok((
            level_err <= 1e-10 && seam < 1e-10 && zero_bay_err <= 1e-12,
            format!("max |E − 2π²(n² + m²)| = {level_err:.3e}, seam mismatch = {seam:.3e}, zero-bay |ΔE| = {zero_bay_err:.3e}"),
        ))
    })();
    finish(9, "broken rectangle", outcome)
}

/// Closed-form scar against truncated bounce sums and the resonance ratio.
pub fn check_scar_profile() -> CheckResult {
    let outcome = (|| {
        let a = 1.0;
        let q = scar_q(a);
        let chi0 = Complex64::new(1.0, 0.0);
        let lambda_p = 7.3;
        // 50 points on [−1, a + 1] that avoid the focal points.
        let xs: Vec<f64> = (0..50)
            .map(|i| -1.0 + (a + 2.0) * (i as f64 + 0.37) / 50.0)
            .collect();
        let profile = scar_profile(a, lambda_p, chi0, &xs)?;
        let mut ok = true;
        let mut worst = 0.0f64;
        for n in [1usize, 5, 20] {
            for (x, closed) in xs.iter().zip(&profile.values) {
                let partial = multi_bounce_scar_sum(a, lambda_p, chi0, *x, n)?;
                let bound = q.powi(2 * n as i32) * closed.norm();
                let err = (closed - partial).norm();
                worst = worst.max(err / bound);
                // The sum itself carries rounding of order 1e-15 |Ψ|.
                ok &= err <= bound * (1.0 + 1e-9) + 1e-13 * closed.norm();
            }
        }
        let theta = 3.0 * PI;
        let on = scar_profile(a, theta / (a + 2.0), chi0, &[0.1])?.resonance_factor;
        let off = scar_profile(a, (theta + PI / 2.0) / (a + 2.0), chi0, &[0.1])?.resonance_factor;
        let ratio = on / off;
        let expect = (1.0 + q * q) / (1.0 - q * q);
        Ok((
            ok && (ratio - expect).abs() <= 1e-10,
            format!("max remainder / q^(2N) bound = {worst:.6}, resonance ratio = {ratio:.12} (expected {expect:.12})"),
        ))
    })();
    finish(10, "scar profile", outcome)
}

/// Largest boundary value over largest interior value of a circle mode.
pub fn circle_boundary_ratio(entry: &SpectrumEntry, m: i64, n: usize) -> Result<f64> {
    let mode = CircleMode::new(entry, m, 0)?;
    let grid = fill(&mode, &GridSpec::new(n, n, [-1.0, -1.0, 1.0, 1.0]));
    let interior = grid.max_abs();
    let edge = (0..720)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / 720.0;
            mode.sample(t.cos(), t.sin()).value.norm()
        })
        .fold(0.0, f64::max);
    Ok(edge / interior)
}

/// Circle and rectangle fields vanish on the boundary.
pub fn check_field_boundaries() -> CheckResult {
    let outcome = (|| {
        let mut circle_worst = 0.0f64;
        for entry in circle_spectrum(1.0, 2, 3, 0)? {
            if let QuantumNumbers::Circle { m, .. } = entry.quantum {
                circle_worst = circle_worst.max(circle_boundary_ratio(&entry, m, 101)?);
            }
        }
        let (a, b) = (2.0, 1.0);
        let spec = GridSpec::new(101, 101, [0.0, 0.0, a, b]);
        let mut rect_worst = 0.0f64;
        for entry in rectangle_spectrum(a, b, 1.0, 3, 3)? {
            let grid = rectangle_field(&entry, a, b, &spec);
            let interior = grid.max_abs();
            let mut edge = 0.0f64;
            for j in 0..spec.ny {
                for i in 0..spec.nx {
                    if i == 0 || j == 0 || i == spec.nx - 1 || j == spec.ny - 1 {
                        edge = edge.max(grid.value(i, j).norm());
                    }
                }
            }
            rect_worst = rect_worst.max(edge / interior);
        }
        Ok((
            circle_worst < 1e-9 && rect_worst < 1e-9,
            format!(
                "circle max boundary/interior = {circle_worst:.3e}, rectangle = {rect_worst:.3e}"
            ),
        ))
    })();
    finish(11, "field boundary vanishing", outcome)
}

/// Checks that a mode evaluates to zero outside its billiard.
pub fn vanishes_outside(mode: &dyn ModeField, curve: &BoundaryCurve, n: usize) -> bool {
    let bb = curve.bounding_box();
    let pad = 0.25 * (bb[2] - bb[0]).max(bb[3] - bb[1]);
    let spec = GridSpec::new(n, n, [bb[0] - pad, bb[1] - pad, bb[2] + pad, bb[3] + pad]);
    let grid = fill(mode, &spec);
    grid.inside
        .iter()
        .zip(&grid.values)
        .all(|(&inside, v)| inside || *v == Complex64::new(0.0, 0.0))
}
