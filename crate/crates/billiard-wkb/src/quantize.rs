//! Quantization conditions and spectra for the supported billiard families.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Rational;
use crate::transport::circle_first_energy;

/// Billiard family a level belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Circle,
    Rectangle,
    Bouncing,
    BrokenRectangle,
}

/// Quantum numbers labelling a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuantumNumbers {
    Circle { m: i64, r: u32 },
    Broken { n0: u32, m0: u32, n: u32, m: u32 },
    Pair { n: u32, m: u32 },
}

/// One quantized level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub family: Family,
    pub quantum: QuantumNumbers,
    pub alpha: f64,
    #[serde(rename = "E0")]
    pub e0: f64,
    #[serde(rename = "E1")]
    pub e1: f64,
    pub lambda: f64,
    pub degenerate: bool,
}

impl SpectrumEntry {
    /// `E = E₀ + E₁ λ⁻²`.
    pub fn energy(&self) -> f64 {
        self.e0 + self.e1 / (self.lambda * self.lambda)
    }

    /// Classical wavenumber `λ√(2E₀)`.
    pub fn wavenumber(&self) -> f64 {
        self.lambda * (2.0 * self.e0).sqrt()
    }
}

/// `(√(1 − x²) − x arccos x) / x`, decreasing from `+∞` at `0⁺` to `0` at `1`.
pub fn inverse_action(x: f64) -> f64 {
    ((1.0 - x * x).max(0.0).sqrt() - x * x.clamp(-1.0, 1.0).acos()) / x
}

fn monotone_checked() -> bool {
    static CHECK: OnceLock<bool> = OnceLock::new();
    *CHECK.get_or_init(|| {
        let xs: Vec<f64> = (1..=2000).map(|i| i as f64 / 2000.0).collect();
        xs.windows(2)
            .all(|w| inverse_action(w[0]) > inverse_action(w[1]))
    })
}

/// Residual of the circle condition
/// `√(k² − m²) − m arccos(m/k) − (r − 1/4)π` at wavenumber `k`.
pub fn circle_condition(k: f64, m: f64, r: u32) -> f64 {
    (k * k - m * m).max(0.0).sqrt() - m * (m / k).clamp(-1.0, 1.0).acos() - (r as f64 - 0.25) * PI
}

/// Wavenumber `λ√(2E₀)` of the circle level `(m, r)`.
pub fn circle_wavenumber(m: u32, r: u32) -> Result<f64> {
    if r == 0 {
        return Err(Error::RootNotBracketed("r must be at least 1".into()));
    }
    if m == 0 {
        return Ok((r as f64 - 0.25) * PI);
    }
    assert!(monotone_checked(), "inverse action is not monotone");
    let target = (r as f64 - 0.25) * PI / m as f64;
    let (mut lo, mut hi) = (1e-300f64.max(f64::EPSILON), 1.0);
    if !(inverse_action(lo) > target && inverse_action(hi) <= target) {
        return Err(Error::RootNotBracketed(format!("target {target}")));
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if inverse_action(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mf = m as f64;
    let mut k = mf / (0.5 * (lo + hi));
    for _ in 0..4 {
        let slope = (k * k - mf * mf).sqrt() / k;
        let step = circle_condition(k, mf, r) / slope;
        k -= step;
        if step.abs() < 1e-15 * k {
            break;
        }
    }
    Ok(k)
}

/// Circle levels for `0 ≤ m ≤ m_max`, `1 ≤ r ≤ r_max`; `order` 1 adds `E₁`.
pub fn circle_spectrum(
    lambda: f64,
    m_max: u32,
    r_max: u32,
    order: u32,
) -> Result<Vec<SpectrumEntry>> {
    check_lambda(lambda)?;
    if r_max < 1 || order > 1 {
        return Err(Error::InvalidInput(
            "need r_max ≥ 1 and order 0 or 1".into(),
        ));
    }
    let mut out = Vec::with_capacity(((m_max + 1) * r_max) as usize);
    for m in 0..=m_max {
        for r in 1..=r_max {
            let k = circle_wavenumber(m, r)?;
            let alpha = (m as f64 / k).acos();
            let e1 = if order == 1 {
                circle_first_energy(alpha)
            } else {
                0.0
            };
            out.push(SpectrumEntry {
                family: Family::Circle,
                quantum: QuantumNumbers::Circle { m: m as i64, r },
                alpha,
                e0: k * k / (2.0 * lambda * lambda),
                e1,
                lambda,
                degenerate: m >= 1,
            });
        }
    }
    Ok(out)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("λ = {lambda}")))
    }
}

fn check_sides(a: f64, b: f64) -> Result<()> {
    if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("sides {a} × {b}")))
    }
}

/// Rectangle levels from `λp b sin α = mπ`, `λp a cos α = nπ`.
pub fn rectangle_spectrum(
    a: f64,
    b: f64,
    lambda: f64,
    n_max: u32,
    m_max: u32,
) -> Result<Vec<SpectrumEntry>> {
    check_sides(a, b)?;
    check_lambda(lambda)?;
    let mut out = Vec::with_capacity((n_max * m_max) as usize);
    for n in 1..=n_max {
        for m in 1..=m_max {
            let kx = n as f64 * PI / a;
            let ky = m as f64 * PI / b;
            let p = kx.hypot(ky) / lambda;
            out.push(SpectrumEntry {
                family: Family::Rectangle,
                quantum: QuantumNumbers::Pair { n, m },
                alpha: (m as f64 * a).atan2(n as f64 * b),
                e0: p * p / 2.0,
                e1: 0.0,
                lambda,
                degenerate: false,
            });
        }
    }
    Ok(out)
}

/// Direction of the bouncing rays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Rays perpendicular to the x axis, bouncing between `y = 0` and `y = b`.
    Vertical,
    /// Rays parallel to the x axis, bouncing between `x = 0` and `x = a`.
    Horizontal,
}

/// Bouncing-ball levels of an `a × b` rectangle or rectangular core:
/// `λp L∥ = nπ` along the rays and `√(2E₁) L⊥ = mπ` across them.
pub fn bouncing_mode_spectrum(
    a: f64,
    b: f64,
    lambda: f64,
    n_max: u32,
    m_max: u32,
    axis: Axis,
) -> Result<Vec<SpectrumEntry>> {
    check_sides(a, b)?;
    check_lambda(lambda)?;
    let (along, across, alpha) = match axis {
        Axis::Vertical => (b, a, PI / 2.0),
        Axis::Horizontal => (a, b, PI / 2.0),
    };
    let mut out = Vec::with_capacity((n_max * m_max) as usize);
    for n in 1..=n_max {
        for m in 1..=m_max {
            let p = n as f64 * PI / (lambda * along);
            let kt = m as f64 * PI / across;
            out.push(SpectrumEntry {
                family: Family::Bouncing,
                quantum: QuantumNumbers::Pair { n, m },
                alpha,
                e0: p * p / 2.0,
                e1: kt * kt / 2.0,
                lambda,
                degenerate: false,
            });
        }
    }
    Ok(out)
}

/// Transverse coefficient `χ(s) = A sin(√(2E₁) s)` of a bouncing mode.
pub fn bouncing_chi(entry: &SpectrumEntry, amplitude: f64, s: f64) -> f64 {
    amplitude * ((2.0 * entry.e1).sqrt() * s).sin()
}

/// Exact side data of a broken rectangle with `a = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommensurateSpec {
    pub b: Rational,
    pub a_prime: Rational,
    pub b_prime: Rational,
    pub n0: u32,
    pub m0: u32,
    /// `l₀ = n₀ a′`.
    pub l0: i64,
    /// `k₀` with `k₀ b = m₀ b′`.
    pub k0: i64,
}

impl CommensurateSpec {
    pub fn new(b: Rational, a_prime: Rational, b_prime: Rational) -> Result<CommensurateSpec> {
        let (rb, ra, rbp) = (b.to_ratio()?, a_prime.to_ratio()?, b_prime.to_ratio()?);
        let zero = Ratio::from_integer(0);
        if rb <= zero || ra <= zero || rbp <= zero || ra > Ratio::from_integer(1) || rbp > rb {
            return Err(Error::InvalidInput("need 0 < a' ≤ 1 and 0 < b' ≤ b".into()));
        }
        let q = rbp / rb;
        let n0 = *ra.denom();
        let m0 = *q.denom();
        Ok(CommensurateSpec {
            b: rb.into(),
            a_prime: ra.into(),
            b_prime: rbp.into(),
            n0: n0 as u32,
            m0: m0 as u32,
            l0: *(ra * n0).numer(),
            k0: *(q * m0).numer(),
        })
    }

    /// Rational approximations of floating-point sides by continued fractions.
    pub fn from_f64(b: f64, a_prime: f64, b_prime: f64) -> Result<CommensurateSpec> {
        let conv = |x: f64| {
            rational_approximation(x, 10_000, 1e-12).ok_or_else(|| {
                Error::IncommensurateSides(format!("{x} has no small rational form"))
            })
        };
        CommensurateSpec::new(conv(b)?, conv(a_prime)?, conv(b_prime)?)
    }
}

/// Best continued-fraction approximation with denominator at most `max_den`,
/// if it is within `tol` of `x`.
pub fn rational_approximation(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (
            a.checked_mul(h1)?.checked_add(h0)?,
            a.checked_mul(k1)?.checked_add(k0)?,
        );
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some(Rational::new(h1, k1));
        }
        let frac = r - a as f64;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    (k1 != 0 && (x - h1 as f64 / k1 as f64).abs() <= tol).then(|| Rational::new(h1, k1))
}

/// Broken-rectangle levels `E = π²/(2λ²)(n² n₀² + m² m₀²/b²)`.
pub fn broken_rectangle_spectrum(
    spec: &CommensurateSpec,
    lambda: f64,
    n_max: u32,
    m_max: u32,
) -> Result<Vec<SpectrumEntry>> {
    check_lambda(lambda)?;
    let b = spec.b.to_f64();
    let mut out = Vec::with_capacity((n_max * m_max) as usize);
    for n in 1..=n_max {
        for m in 1..=m_max {
            let l = (n * spec.n0) as f64;
            let p = (m * spec.m0) as f64 * PI / (b * lambda);
            let kt = l * PI;
            out.push(SpectrumEntry {
                family: Family::BrokenRectangle,
                quantum: QuantumNumbers::Broken {
                    n0: spec.n0,
                    m0: spec.m0,
                    n,
                    m,
                },
                alpha: PI / 2.0,
                e0: p * p / 2.0,
                e1: kt * kt / 2.0,
                lambda,
                degenerate: false,
            });
        }
    }
    Ok(out)
}

/// Amplitude ratio `A₂/A₁ = (−1)^{l+1}` across the seam for horizontal index `l`.
pub fn seam_amplitude_ratio(l: u32) -> f64 {
    if l.is_multiple_of(2) {
        -1.0
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_m0() {
        let s = circle_spectrum(1.0, 0, 1, 1).unwrap();
        assert!((s[0].e0 - (0.75 * PI).powi(2) / 2.0).abs() < 1e-12);
        assert!((s[0].e0 - 2.775_826_237_806_382).abs() < 1e-12);
        assert!((s[0].alpha - PI / 2.0).abs() < 1e-15);
        assert!((s[0].e1 - 0.125).abs() < 1e-15);
        assert!(!s[0].degenerate);
    }

    #[test]
    fn circle_root_residuals() {
        for m in 1..5 {
            for r in 1..30 {
                let k = circle_wavenumber(m, r).unwrap();
                assert!(circle_condition(k, m as f64, r).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn rectangle_examples() {
        let s = rectangle_spectrum(PI, PI, 1.0, 1, 1).unwrap();
        assert!((s[0].energy() - 1.0).abs() < 1e-15);
        let s = rectangle_spectrum(2.0, 1.0, 1.0, 3, 1).unwrap();
        assert!((s[2].energy() - 13.0 * PI * PI / 8.0).abs() < 1e-12);
    }

    #[test]
    fn commensurate_half_bay() {
        let h = Rational::new(1, 2);
        let spec = CommensurateSpec::new(Rational::new(1, 1), h, h).unwrap();
        assert_eq!((spec.n0, spec.m0, spec.l0, spec.k0), (2, 2, 1, 1));
        let zero_bay = CommensurateSpec::new(
            Rational::new(3, 2),
            Rational::new(1, 1),
            Rational::new(3, 2),
        )
        .unwrap();
        assert_eq!((zero_bay.n0, zero_bay.m0), (1, 1));
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(
            rational_approximation(0.5, 10_000, 1e-12),
            Some(Rational::new(1, 2))
        );
        assert_eq!(
            rational_approximation(0.375, 10_000, 1e-12),
            Some(Rational::new(3, 8))
        );
        assert!(rational_approximation(2f64.sqrt() - 1.0, 10_000, 1e-12).is_none());
        assert!(CommensurateSpec::from_f64(1.0, PI / 4.0, 0.5).is_err());
    }

    #[test]
    fn seam_signs() {
        assert_eq!(seam_amplitude_ratio(2), -1.0);
        assert_eq!(seam_amplitude_ratio(3), 1.0);
    }
}
