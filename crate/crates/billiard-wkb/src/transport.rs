//! Transport of the semiclassical amplitude coefficients along rays.
//!
//! On a bundle the wave function is written as
//! `|J|^{-1/2} e^{σiλp(d + ∫cos α)} Σ_j χ_j λ^{-j}` with energy
//! `E = p²/2 + Σ_{k≥1} E_k λ^{-k-1}`. The coefficients obey
//!
//! ```text
//! χ_{j+1}(d) = χ_{j+1}(0) + (σi/2p) ∫_0^d (D χ_j + 2 Σ_{k=1}^{j+1} E_k χ_{j+1-k}) da
//! ```
//!
//! where `D` is the Laplacian conjugated by `|J|^{1/2}`. For s-independent
//! coefficients on an arc of constant curvature `κ` and constant incidence
//! `α`, with `j = sin α − κd`,
//!
//! ```text
//! D = (cos²α/j² + 1) ∂² + (2κ cos²α/j³) ∂ + κ² ((5/4) cos²α/j⁴ + 1/(4j²)).
//! ```
//!
//! Coefficients are stored in closed form as sums of `c vⁿ (ln v)ᵏ` with
//! `v = j` on curved arcs and `v = d` on straight ones. Integrals that pass
//! the caustic `j = 0` follow a small semicircle in the complex `d` plane:
//! above the singular point for `σ = +`, below it for `σ = −`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bundles::{Bundle, BundleMap, EscapeProfile};
use crate::error::{Error, Result};
use crate::quadrature::integrate;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Sign of the phase of a semiclassical wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Signature {
    Plus,
    Minus,
}

impl Signature {
    pub fn value(self) -> f64 {
        match self {
            Signature::Plus => 1.0,
            Signature::Minus => -1.0,
        }
    }

    /// The side of the caustic an integration path must take.
    pub fn contour(self) -> Contour {
        match self {
            Signature::Plus => Contour::Above,
            Signature::Minus => Contour::Below,
        }
    }

    pub fn flip(self) -> Signature {
        match self {
            Signature::Plus => Signature::Minus,
            Signature::Minus => Signature::Plus,
        }
    }
}

/// Side of the real `d` axis used to pass a caustic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Contour {
    Above,
    Below,
}

/// Factor picked up by the amplitude `J^{-1/2}` when continued past the
/// caustic along the contour of signature `σ`: `σi`.
///
/// The coefficient χ carries the reciprocal, so a flight that crosses the
/// caustic multiplies χ by `−σi` (see [`crate::skeleton::Transition::eta`]).
pub fn caustic_continuation_factor(sigma: Signature) -> Complex64 {
    Complex64::new(0.0, sigma.value())
}

/// Sum of terms `c vⁿ (ln v)ᵏ`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Series {
    terms: BTreeMap<(i32, u32), Complex64>,
}

impl Series {
    pub fn zero() -> Series {
        Series::default()
    }

    pub fn constant(c: Complex64) -> Series {
        Series::monomial(c, 0, 0)
    }

    pub fn monomial(c: Complex64, power: i32, log_power: u32) -> Series {
        let mut s = Series::zero();
        s.add_term(c, power, log_power);
        s
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, u32, Complex64)> + '_ {
        self.terms.iter().map(|(&(n, k), &c)| (n, k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, c: Complex64, n: i32, k: u32) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let e = self.terms.entry((n, k)).or_insert(Complex64::new(0.0, 0.0));
        *e += c;
        if *e == Complex64::new(0.0, 0.0) {
            self.terms.remove(&(n, k));
        }
    }

    pub fn plus(&self, other: &Series) -> Series {
        let mut out = self.clone();
        for (n, k, c) in other.terms() {
            out.add_term(c, n, k);
        }
        out
    }

    pub fn scale(&self, f: Complex64) -> Series {
        let mut out = Series::zero();
        for (n, k, c) in self.terms() {
            out.add_term(c * f, n, k);
        }
        out
    }

    /// Multiplies by `vᵐ`.
    pub fn shift(&self, m: i32) -> Series {
        let mut out = Series::zero();
        for (n, k, c) in self.terms() {
            out.add_term(c, n + m, k);
        }
        out
    }

    /// `d/dv`.
    pub fn derivative(&self) -> Series {
        let mut out = Series::zero();
        for (n, k, c) in self.terms() {
            out.add_term(c * n as f64, n - 1, k);
            if k > 0 {
                out.add_term(c * k as f64, n - 1, k - 1);
            }
        }
        out
    }

    /// An antiderivative in `v`.
    pub fn antiderivative(&self) -> Series {
        let mut out = Series::zero();
        for (n, k, c) in self.terms() {
            out = out.plus(&antiderivative_term(c, n, k));
        }
        out
    }

    /// Value at `v`; a negative real `v` takes `arg v = −π` on the `Above`
    /// contour and `+π` on the `Below` one.
    pub fn eval(&self, v: Complex64, contour: Contour) -> Complex64 {
        let log = if self.terms.keys().any(|&(_, k)| k > 0) {
            complex_log(v, contour)
        } else {
            Complex64::new(0.0, 0.0)
        };
        self.terms()
            .map(|(n, k, c)| c * v.powi(n) * log.powu(k))
            .sum()
    }
}

fn antiderivative_term(c: Complex64, n: i32, k: u32) -> Series {
    if n == -1 {
        return Series::monomial(c / (k as f64 + 1.0), 0, k + 1);
    }
    let m = n as f64 + 1.0;
    let mut out = Series::monomial(c / m, n + 1, k);
    if k > 0 {
        out = out.plus(&antiderivative_term(-c * k as f64 / m, n, k - 1));
    }
    out
}

fn complex_log(v: Complex64, contour: Contour) -> Complex64 {
    let mut arg = v.im.atan2(v.re);
    if v.im == 0.0 && v.re < 0.0 {
        arg = match contour {
            Contour::Above => -std::f64::consts::PI,
            Contour::Below => std::f64::consts::PI,
        };
    }
    Complex64::new(v.norm().ln(), arg)
}

/// The conjugated Laplacian acting on s-independent coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedOperator {
    pub alpha: f64,
    /// Curvature of the supporting arc.
    pub kappa: f64,
}

/// Coefficients of `a ∂² + b ∂ + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorCoefficients {
    pub second: f64,
    pub first: f64,
    pub zeroth: f64,
}

impl ReducedOperator {
    pub fn new(alpha: f64, kappa: f64) -> ReducedOperator {
        ReducedOperator { alpha, kappa }
    }

    /// Operator of a constant-incidence bundle.
    pub fn for_bundle(bundle: &Bundle) -> Result<ReducedOperator> {
        match bundle.profile {
            EscapeProfile::ConstantIncidence(a) => Ok(ReducedOperator::new(a, bundle.curvature)),
            EscapeProfile::Function(_) => Err(Error::UnsupportedBundleFamily(
                "non-constant incidence".into(),
            )),
        }
    }

    fn curved(&self) -> bool {
        self.kappa != 0.0
    }

    /// `j = sin α − κd`.
    pub fn j(&self, d: f64) -> f64 {
        self.alpha.sin() - self.kappa * d
    }

    /// Series variable at `d`.
    pub fn variable(&self, d: Complex64) -> Complex64 {
        if self.curved() {
            self.alpha.sin() - self.kappa * d
        } else {
            d
        }
    }

    fn dv_dd(&self) -> f64 {
        if self.curved() {
            -self.kappa
        } else {
            1.0
        }
    }

    /// Distance from the boundary to the caustic, when it is ahead of the ray.
    pub fn caustic_distance(&self) -> Option<f64> {
        (self.kappa > 0.0).then(|| self.alpha.sin() / self.kappa)
    }

    pub fn coefficients(&self, d: f64) -> OperatorCoefficients {
        let c2 = self.alpha.cos().powi(2);
        let j = self.j(d);
        let k = self.kappa;
        OperatorCoefficients {
            second: c2 / (j * j) + 1.0,
            first: 2.0 * k * c2 / j.powi(3),
            zeroth: k * k * (1.25 * c2 / j.powi(4) + 0.25 / (j * j)),
        }
    }

    /// `D f` in closed form.
    pub fn apply(&self, f: &Series) -> Series {
        let c2 = Complex64::new(self.alpha.cos().powi(2), 0.0);
        let g = self.dv_dd();
        let f1 = f.derivative().scale(Complex64::new(g, 0.0));
        let f2 = f
            .derivative()
            .derivative()
            .scale(Complex64::new(g * g, 0.0));
        if self.curved() {
            let k = self.kappa;
            f2.shift(-2)
                .scale(c2)
                .plus(&f2)
                .plus(&f1.shift(-3).scale(c2 * 2.0 * k))
                .plus(&f.shift(-4).scale(c2 * 1.25 * k * k))
                .plus(&f.shift(-2).scale(Complex64::new(0.25 * k * k, 0.0)))
        } else {
            let s2 = self.alpha.sin().powi(2);
            f2.scale((c2 / s2) + 1.0)
        }
    }

    /// `∫_0^d f(v(a)) da` along the contour, with `f` a series in `v`.
    pub fn integrate_closed(&self, f: &Series, d: f64, contour: Contour) -> Complex64 {
        let anti = f.antiderivative();
        let v0 = self.variable(Complex64::new(0.0, 0.0));
        let v1 = self.variable(Complex64::new(d, 0.0));
        (anti.eval(v1, contour) - anti.eval(v0, contour)) / self.dv_dd()
    }

    /// The same integral by quadrature along a path that detours around the
    /// caustic on a semicircle of the given radius, shrunk when an end point
    /// lies closer to the caustic than that.
    pub fn integrate_numeric(
        &self,
        f: &Series,
        d: f64,
        contour: Contour,
        radius: f64,
    ) -> Result<Complex64> {
        let tol = 1e-13;
        let eval_at = |x: Complex64| f.eval(self.variable(x), contour);
        match self.caustic_distance() {
            Some(dc) if (d - dc).abs() <= 1e-12 * dc => Err(Error::InvalidInput(
                "integration ends on the caustic".into(),
            )),
            Some(dc) if d > dc => {
                let radius = radius.min(0.5 * (d - dc)).min(0.5 * dc);
                if !(radius > 0.0) {
                    return Err(Error::InvalidInput("detour radius must be positive".into()));
                }
                let side = match contour {
                    Contour::Above => 1.0,
                    Contour::Below => -1.0,
                };
                let lead = integrate(&|x| eval_at(Complex64::new(x, 0.0)), 0.0, dc - radius, tol)?;
                // x = dc + r e^{iφ}, φ from π down to 0 above, from −π up to 0 below.
                let arc = integrate(
                    &|t| {
                        let phi = side * std::f64::consts::PI * (1.0 - t);
                        let e = Complex64::from_polar(1.0, phi);
                        let x = dc + radius * e;
                        let dx = radius * I * e * (-side * std::f64::consts::PI);
                        eval_at(x) * dx
                    },
                    0.0,
                    1.0,
                    tol,
                )?;
                let tail = integrate(&|x| eval_at(Complex64::new(x, 0.0)), dc + radius, d, tol)?;
                Ok(lead + arc + tail)
            }
            _ => integrate(&|x| eval_at(Complex64::new(x, 0.0)), 0.0, d, tol),
        }
    }
}

/// Energy `E₀ + Σ_k E_k λ^{-k-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergySeries {
    pub e0: f64,
    pub corrections: Vec<Complex64>,
}

impl EnergySeries {
    pub fn new(e0: f64) -> EnergySeries {
        EnergySeries {
            e0,
            corrections: Vec::new(),
        }
    }

    pub fn assembled(&self, lambda: f64) -> Complex64 {
        let mut e = Complex64::new(self.e0, 0.0);
        for (i, ek) in self.corrections.iter().enumerate() {
            e += ek * lambda.powi(-(i as i32) - 2);
        }
        e
    }

    /// `E_k`, zero when not computed.
    pub fn correction(&self, k: usize) -> Complex64 {
        self.corrections.get(k - 1).copied().unwrap_or_default()
    }
}

/// Coefficient stack `χ₀, χ₁, …` on a constant-incidence bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSeries {
    pub signature: Signature,
    /// Classical momentum `p = √(2E₀)`.
    pub p: f64,
    pub operator: ReducedOperator,
    /// `orders[j]` is `χ_j` as a series in the operator's variable.
    pub orders: Vec<Series>,
}

impl ChiSeries {
    /// `χ₀ ≡ c`, no corrections.
    pub fn zeroth(
        operator: ReducedOperator,
        p: f64,
        signature: Signature,
        c: Complex64,
    ) -> ChiSeries {
        ChiSeries {
            signature,
            p,
            operator,
            orders: vec![Series::constant(c)],
        }
    }

    pub fn order(&self) -> usize {
        self.orders.len() - 1
    }

    /// Integrand `D χ_j + 2 Σ_{k=1}^{j} E_k χ_{j+1-k}` of the next order,
    /// leaving out the unknown `E_{j+1} χ₀` term.
    fn integrand_without_top(&self, energy: &EnergySeries) -> Series {
        let j = self.order();
        let mut g = self.operator.apply(&self.orders[j]);
        for k in 1..=j {
            g = g.plus(&self.orders[j + 1 - k].scale(energy.correction(k) * 2.0));
        }
        g
    }

    fn prefactor(&self) -> Complex64 {
        I * self.signature.value() / (2.0 * self.p)
    }

    /// Adds `χ_{j+1}` with boundary value `start` at `d = 0`, using `E_{j+1}`
    /// from `energy`.
    pub fn extend(&self, energy: &EnergySeries, start: Complex64) -> ChiSeries {
        let top = self.order() + 1;
        let g = self
            .integrand_without_top(energy)
            .plus(&self.orders[0].scale(energy.correction(top) * 2.0));
        let op = &self.operator;
        let anti = g.antiderivative().scale(self.prefactor() / op.dv_dd());
        let base = anti.eval(
            op.variable(Complex64::new(0.0, 0.0)),
            self.signature.contour(),
        );
        let next = anti.plus(&Series::constant(start - base));
        let mut out = self.clone();
        out.orders.push(next);
        out
    }

    /// Values `χ_0(d), …, χ_j(d)` reached along `contour`.
    pub fn values(&self, d: f64, contour: Contour) -> Result<Vec<Complex64>> {
        if contour != self.signature.contour() {
            return Err(Error::ContourSignatureMismatch);
        }
        let v = self.operator.variable(Complex64::new(d, 0.0));
        Ok(self.orders.iter().map(|s| s.eval(v, contour)).collect())
    }

    /// `Σ_j χ_j(d) λ^{-j}`.
    pub fn sum(&self, d: f64, lambda: f64) -> Result<Complex64> {
        let vals = self.values(d, self.signature.contour())?;
        Ok(vals
            .iter()
            .enumerate()
            .map(|(j, c)| c * lambda.powi(-(j as i32)))
            .sum())
    }

    /// The next order at `d` by direct quadrature of the recursion, for validation.
    pub fn next_order_by_quadrature(
        &self,
        energy: &EnergySeries,
        d: f64,
        radius: f64,
    ) -> Result<Complex64> {
        let top = self.order() + 1;
        let g = self
            .integrand_without_top(energy)
            .plus(&self.orders[0].scale(energy.correction(top) * 2.0));
        let integral = self
            .operator
            .integrate_numeric(&g, d, self.signature.contour(), radius)?;
        Ok(self.prefactor() * integral)
    }
}

/// Values of the χ stack at distance `d`, checking the contour side.
pub fn advance_chi(chi: &ChiSeries, d: f64, contour: Contour) -> Result<Vec<Complex64>> {
    chi.values(d, contour)
}

/// `−η_σ e^{σiλpδ} |∂h/∂s|^{-1/2}` for one flight.
pub fn reflection_factor(
    map: &BundleMap,
    h_prime: f64,
    lambda_p: f64,
    sigma: Signature,
) -> Complex64 {
    let eta = if map.caustic_crossed {
        caustic_continuation_factor(sigma).conj()
    } else {
        Complex64::new(1.0, 0.0)
    };
    -eta * Complex64::from_polar(
        h_prime.abs().powf(-0.5),
        sigma.value() * lambda_p * map.delta,
    )
}

/// Carries χ values at the end of a flight onto the target bundle at `d = 0`.
pub fn reflect_chi(
    values: &[Complex64],
    map: &BundleMap,
    h_prime: f64,
    lambda_p: f64,
    sigma: Signature,
) -> Vec<Complex64> {
    let f = reflection_factor(map, h_prime, lambda_p, sigma);
    values.iter().map(|v| v * f).collect()
}

/// Inverse of [`reflect_chi`] for the same flight.
pub fn unreflect_chi(
    values: &[Complex64],
    map: &BundleMap,
    h_prime: f64,
    lambda_p: f64,
    sigma: Signature,
) -> Vec<Complex64> {
    let f = reflection_factor(map, h_prime, lambda_p, sigma);
    values.iter().map(|v| v / f).collect()
}

/// Coefficients of the billiard Laplacian in ray coordinates `(d, s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceCoefficients {
    pub dd: f64,
    pub ss: f64,
    /// Coefficient of `∂²/∂s∂d`.
    pub sd: f64,
    pub d: f64,
    pub s: f64,
}

/// Laplacian in ray coordinates of a constant-incidence bundle on an arc of
/// constant curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplacianDS {
    pub alpha: f64,
    pub kappa: f64,
}

impl LaplacianDS {
    pub fn coefficients(&self, d: f64) -> LaplaceCoefficients {
        let c = self.alpha.cos();
        let j = self.alpha.sin() - self.kappa * d;
        let k = self.kappa;
        LaplaceCoefficients {
            dd: (c * c + j * j) / (j * j),
            ss: 1.0 / (j * j),
            sd: -2.0 * c / (j * j),
            d: k * c * c / j.powi(3) - k / j,
            s: -c * k / j.powi(3),
        }
    }
}

pub fn laplacian_ds(bundle: &Bundle) -> Result<LaplacianDS> {
    match bundle.profile {
        EscapeProfile::ConstantIncidence(alpha) => Ok(LaplacianDS {
            alpha,
            kappa: bundle.curvature,
        }),
        EscapeProfile::Function(_) => Err(Error::UnsupportedBundleFamily(
            "non-constant incidence".into(),
        )),
    }
}

/// First energy correction of a constant-incidence bundle on the unit circle.
pub fn circle_first_energy(alpha: f64) -> f64 {
    let (s, c) = alpha.sin_cos();
    (1.0 + 5.0 / 3.0 * (c / s).powi(2)) / (8.0 * s * s)
}

/// Solves the chord closure on a circle of curvature `kappa` order by order:
/// each `E_k` is fixed by requiring `χ_k` to vanish again after one chord.
pub fn circle_energy_series(
    alpha: f64,
    kappa: f64,
    p: f64,
    order: usize,
    sigma: Signature,
) -> (EnergySeries, ChiSeries) {
    let op = ReducedOperator::new(alpha, kappa);
    let chord = 2.0 * alpha.sin() / kappa;
    let mut energy = EnergySeries::new(p * p / 2.0);
    let mut chi = ChiSeries::zeroth(op, p, sigma, Complex64::new(1.0, 0.0));
    for _ in 0..order {
        let g = chi.integrand_without_top(&energy);
        let known = op.integrate_closed(&g, chord, sigma.contour());
        energy.corrections.push(-known / (2.0 * chord));
        chi = chi.extend(&energy, Complex64::new(0.0, 0.0));
    }
    (energy, chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn series_calculus() {
        // d/dv (v³ ln² v) = 3v² ln² v + 2 v² ln v
        let s = Series::monomial(c(1.0), 3, 2);
        let d = s.derivative();
        assert_eq!(
            d,
            Series::monomial(c(3.0), 2, 2).plus(&Series::monomial(c(2.0), 2, 1))
        );
        for (n, k) in [(-1, 0), (-1, 2), (-3, 1), (2, 3), (0, 0)] {
            let t = Series::monomial(c(1.0), n, k);
            assert_eq!(t.antiderivative().derivative(), t, "term v^{n} ln^{k}");
        }
    }

    #[test]
    fn log_branch_follows_contour() {
        let s = Series::monomial(c(1.0), 0, 1);
        let v = c(-2.0);
        assert!((s.eval(v, Contour::Above).im + PI).abs() < 1e-15);
        assert!((s.eval(v, Contour::Below).im - PI).abs() < 1e-15);
    }

    #[test]
    fn operator_on_constant() {
        let op = ReducedOperator::new(PI / 2.0, 1.0);
        let x = 0.3;
        let applied = op.apply(&Series::constant(c(1.0)));
        let v = op.variable(c(x));
        let val = applied.eval(v, Contour::Above);
        assert!((val.re - 0.25 / (1.0 - x).powi(2)).abs() < 1e-14);
        let co = op.coefficients(x);
        assert!((co.zeroth - val.re).abs() < 1e-14);
    }

    #[test]
    fn flat_first_order() {
        let op = ReducedOperator::new(0.7, 0.0);
        let p = 2.5;
        let e1 = 0.3;
        let energy = EnergySeries {
            e0: p * p / 2.0,
            corrections: vec![c(e1)],
        };
        for sigma in [Signature::Plus, Signature::Minus] {
            let chi = ChiSeries::zeroth(op, p, sigma, c(1.0)).extend(&energy, c(0.0));
            let d = 1.7;
            let v = chi.values(d, sigma.contour()).unwrap();
            let expect = Complex64::new(0.0, sigma.value() / p * e1 * d);
            assert!((v[1] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn circle_closure_and_closed_form() {
        for alpha in [PI / 2.0, PI / 3.0, 0.5] {
            let (energy, chi) = circle_energy_series(alpha, 1.0, 4.0, 1, Signature::Plus);
            assert!((energy.corrections[0].re - circle_first_energy(alpha)).abs() < 1e-12);
            assert!(energy.corrections[0].im.abs() < 1e-14);
            let end = chi.values(2.0 * alpha.sin(), Contour::Above).unwrap();
            assert!(end[1].norm() < 1e-12);
        }
        assert!((circle_first_energy(PI / 2.0) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn contour_mismatch_is_rejected() {
        let (_, chi) = circle_energy_series(1.0, 1.0, 3.0, 1, Signature::Minus);
        assert_eq!(
            chi.values(0.5, Contour::Above),
            Err(Error::ContourSignatureMismatch)
        );
    }

    #[test]
    fn continuation_factor() {
        assert_eq!(
            caustic_continuation_factor(Signature::Plus),
            Complex64::new(0.0, 1.0)
        );
        assert_eq!(
            caustic_continuation_factor(Signature::Minus),
            Complex64::new(0.0, -1.0)
        );
    }
}
