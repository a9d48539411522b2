//! Independent reference computations.
//!
//! Nothing here goes through the quantization or transport code: Bessel
//! functions come from their series and asymptotic expansions, the contour
//! integral is evaluated by quadrature of the Laplacian written from the
//! metric of the ray coordinates, and ray families are counted by direct
//! simulation.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::BoundaryCurve;
use crate::quadrature::integrate;

fn asymptotic_threshold(m: u32) -> f64 {
    12f64.max(2.0 * m as f64)
}

/// Power series of `J_m(x)`.
pub fn bessel_j_series(m: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    for k in 1..=m {
        term *= half / k as f64;
    }
    let mut sum = term;
    let q = half * half;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= -q / (k as f64 * (k + m) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && k as f64 > half {
            break;
        }
        if k > 500 {
            break;
        }
    }
    sum
}

/// Hankel asymptotic expansion of `J_m(x)` for large `x`.
pub fn bessel_j_asymptotic(m: u32, x: f64) -> f64 {
    let mu = 4.0 * (m as f64).powi(2);
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0f64;
    let mut prev = f64::INFINITY;
    for k in 1..200u32 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if k > 8 && (term.abs() > prev || term.abs() < 1e-17) {
            break;
        }
        prev = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
    }
    let chi = x - (m as f64 / 2.0 + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// `|series − asymptotic|` at the switch point.
pub fn seam_discrepancy(m: u32) -> f64 {
    let x = asymptotic_threshold(m);
    (bessel_j_series(m, x) - bessel_j_asymptotic(m, x)).abs()
}

fn seam_checked() -> bool {
    static CHECK: OnceLock<bool> = OnceLock::new();
    *CHECK.get_or_init(|| (0..=3).all(|m| seam_discrepancy(m) < 1e-10))
}

/// Bessel function of the first kind `J_m(x)` for `x ≥ 0`.
pub fn bessel_j(m: u32, x: f64) -> f64 {
    assert!(
        seam_checked(),
        "Bessel series and asymptotic branches disagree at the seam"
    );
    if x > asymptotic_threshold(m) {
        bessel_j_asymptotic(m, x)
    } else {
        bessel_j_series(m, x)
    }
}

/// The first zeros of `J_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesselZeroTable {
    pub m: u32,
    pub zeros: Vec<f64>,
}

/// First `r_max` positive zeros of `J_m`: a scan with step π/4 followed by bisection.
pub fn bessel_zeros(m: u32, r_max: usize) -> Result<BesselZeroTable> {
    let mut upper = PI * (r_max as f64 + m as f64 / 2.0 + 1.0) + 5.0;
    for _ in 0..2 {
        let zeros = scan_zeros(m, r_max, upper);
        if zeros.len() == r_max {
            return Ok(BesselZeroTable { m, zeros });
        }
        upper *= 2.0;
    }
    Err(Error::ScanExhausted { m })
}

fn scan_zeros(m: u32, r_max: usize, upper: f64) -> Vec<f64> {
    let step = PI / 4.0;
    let mut zeros = Vec::with_capacity(r_max);
    let mut x = if m == 0 { 0.5 } else { m as f64 };
    let mut fx = bessel_j(m, x);
    while zeros.len() < r_max && x < upper {
        let xn = x + step;
        let fxn = bessel_j(m, xn);
        if fx == 0.0 {
            zeros.push(x);
        } else if fx * fxn < 0.0 {
            let (mut lo, mut hi, mut flo) = (x, xn, fx);
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                let fm = bessel_j(m, mid);
                if fm * flo > 0.0 {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
        x = xn;
        fx = fxn;
    }
    zeros
}

/// Laplacian of the circle ray coordinates conjugated by `J^{1/2}` and applied
/// to the constant 1, from the metric `g_dd = 1`, `g_ds = cos α`,
/// `g_ss = cos²α + J²` with `J = sin α − x`.
fn conjugated_laplacian_of_one(alpha: f64, x: Complex64) -> Complex64 {
    let c2 = alpha.cos().powi(2);
    let j = alpha.sin() - x;
    let second = (c2 + j * j) / (j * j);
    let first = c2 / (j * j * j) - 1.0 / j;
    second * 0.75 / (j * j) + first * 0.5 / j
}

/// `∫ J^{1/2} Δ J^{-1/2} dx` over the chord `0 → 2 sin α` of the unit circle,
/// passing the caustic `x = sin α` on an upper semicircle of radius
/// `radius_factor · sin α`.
pub fn contour_integral_e1(alpha: f64, radius_factor: f64) -> Result<Complex64> {
    if !(alpha > 0.0 && alpha <= PI / 2.0 + 1e-15) || !(radius_factor > 0.0 && radius_factor < 1.0)
    {
        return Err(Error::InvalidInput(
            "need 0 < α ≤ π/2 and 0 < radius factor < 1".into(),
        ));
    }
    let s = alpha.sin();
    let rho = radius_factor * s;
    let f = |x: Complex64| conjugated_laplacian_of_one(alpha, x);
    let tol = 1e-13;
    let left = integrate(&|x| f(Complex64::new(x, 0.0)), 0.0, s - rho, tol)?;
    let arc = integrate(
        &|phi| {
            let e = Complex64::from_polar(1.0, phi);
            f(s + rho * e) * rho * Complex64::new(0.0, 1.0) * e
        },
        PI,
        0.0,
        tol,
    )?;
    let right = integrate(&|x| f(Complex64::new(x, 0.0)), s + rho, 2.0 * s, tol)?;
    Ok(left + arc + right)
}

/// One exact level of the rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactLevel {
    pub n: u32,
    pub m: u32,
    pub energy: f64,
}

/// Separable Dirichlet spectrum `π²/(2λ²)(n²/a² + m²/b²)`.
pub fn exact_rectangle_spectrum(
    a: f64,
    b: f64,
    lambda: f64,
    n_max: u32,
    m_max: u32,
) -> Vec<ExactLevel> {
    let mut out = Vec::with_capacity((n_max * m_max) as usize);
    for n in 1..=n_max {
        for m in 1..=m_max {
            let nn = (n as f64 / a).powi(2);
            let mm = (m as f64 / b).powi(2);
            out.push(ExactLevel {
                n,
                m,
                energy: PI * PI / (2.0 * lambda * lambda) * (nn + mm),
            });
        }
    }
    out
}

/// Least-squares slope of the level-counting function against the area law
/// `N(E) ≈ ab E / (2π)` (λ = 1), as a ratio.
pub fn weyl_slope_ratio(a: f64, b: f64, e_max: f64) -> f64 {
    let n_max = (a * (2.0 * e_max).sqrt() / PI).ceil() as u32 + 1;
    let m_max = (b * (2.0 * e_max).sqrt() / PI).ceil() as u32 + 1;
    let mut levels: Vec<f64> = exact_rectangle_spectrum(a, b, 1.0, n_max, m_max)
        .into_iter()
        .map(|l| l.energy)
        .filter(|&e| e <= e_max)
        .collect();
    levels.sort_by(f64::total_cmp);
    let samples: Vec<(f64, f64)> = (1..=50)
        .map(|i| {
            let e = e_max * i as f64 / 50.0;
            (e, levels.partition_point(|&x| x <= e) as f64)
        })
        .collect();
    let n = samples.len() as f64;
    let (sx, sy) = samples
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = samples.iter().fold((0.0, 0.0), |(p, q), &(x, y)| {
        (p + (x - mx) * (y - my), q + (x - mx).powi(2))
    });
    (num / den) / (a * b / (2.0 * PI))
}

/// Distinct `(arc, incidence)` pairs visited by a ray over `bounces` reflections.
pub fn simulate_ray_families(
    curve: &BoundaryCurve,
    s: f64,
    alpha: f64,
    bounces: usize,
) -> Result<Vec<(usize, f64)>> {
    let (arc0, _) = curve.locate(s);
    let mut seen: Vec<(usize, f64)> = vec![(arc0, alpha)];
    let (mut s, mut alpha) = (s, alpha);
    for _ in 0..bounces {
        let hit = curve.shoot(&curve.ray(s, alpha))?;
        s = hit.arrival_s;
        alpha = hit.arrival_incidence;
        if !seen
            .iter()
            .any(|&(a, x)| a == hit.arrival_arc && (x - alpha).abs() < 1e-9)
        {
            seen.push((hit.arrival_arc, alpha));
        }
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_values() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(1, 0.0), 0.0);
        assert!((bessel_j(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j(1, 20.0) - 0.066_833_124_175_849_93).abs() < 1e-12);
    }

    #[test]
    fn seam_is_continuous() {
        for m in 0..=3 {
            assert!(seam_discrepancy(m) < 1e-10, "m = {m}");
        }
    }

    #[test]
    fn first_zeros() {
        let z0 = bessel_zeros(0, 3).unwrap();
        assert!((z0.zeros[0] - 2.404_825_557_695_773).abs() < 1e-11);
        let z1 = bessel_zeros(1, 1).unwrap();
        assert!((z1.zeros[0] - 3.831_705_970_207_512).abs() < 1e-11);
    }

    #[test]
    fn rectangle_unit_level() {
        let l = exact_rectangle_spectrum(PI, PI, 1.0, 1, 1);
        assert!((l[0].energy - 1.0).abs() < 1e-15);
    }
}
