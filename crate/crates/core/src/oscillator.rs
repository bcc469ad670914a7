//! The adelic harmonic oscillator: p-adic trigonometric series, the
//! evolution kernel
//! `K_t(x, y) = λ(2 sin t) |sin t|^{-1/2} χ(xy/sin t - (x² + y²)/(2 tan t))`
//! and eigenstate checks.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::bruhat::{hermite_function, state_norm, Ball, PAdicTestFunction, RealTestFunction, SchwartzBruhat};
use crate::characters::{chi_inf, chi_p};
use crate::cyclotomic::Cyclotomic;
use crate::distrib::delta_at;
use crate::error::{Error, Result};
use crate::gauss::{lambda_inf, lambda_p};
use crate::integrate::{integrate_qp, integrate_real, Integrand, QuadratureConfig, SphereDecompositionPlan};
use crate::qcore::{int, Adele, PAdicApprox, Prime, Rational};

/// A truncated power series value together with the guaranteed valuation
/// of everything left out.
#[derive(Debug, Clone)]
pub struct PAdicAnalyticValue {
    pub value: PAdicApprox,
    pub truncation_valuation: i64,
}

/// Smallest valuation for which the trigonometric series converge:
/// `|t|_p ≤ p^{-1}`, or `|t|_2 ≤ 2^{-2}`.
pub fn trig_domain(p: Prime) -> i64 {
    if p.get() == 2 {
        2
    } else {
        1
    }
}

fn check_domain(t: &PAdicApprox) -> Result<i64> {
    let v = t.valuation_floor();
    let need = trig_domain(t.prime());
    if v < need {
        return Err(Error::Domain(
            alloc::format!("t = {} at p = {}", t.approximant(), t.prime()),
            "p-adic trigonometric series need |t|_p ≤ p^-1 (|t|_2 ≤ 1/4)",
        ));
    }
    Ok(v)
}

/// `Σ_{n ≡ parity mod 2} (-1)^{⌊n/2⌋} t^n / n!`, summed until every omitted
/// term has valuation at least the target. `v(t^n/n!) ≥ n v(t) - (n-1)/(p-1)`
/// and the bound increases with `n` on the domain.
fn trig_series(t: &PAdicApprox, parity: u32) -> Result<PAdicAnalyticValue> {
    let v = check_domain(t)?;
    let p = t.prime();
    let target = t.precision();
    let bound = |n: i64| n * v - (n - 1) / (p.get() as i64 - 1);
    let x = t.approximant();
    let mut sum = Rational::zero();
    let mut term = Rational::one();
    let mut n: i64 = 0;
    loop {
        if n > 0 {
            term = &term * x / int(n);
        }
        if n as u32 % 2 == parity {
            let sign = if (n / 2) % 2 == 0 { 1 } else { -1 };
            sum += &term * int(sign);
        }
        n += 1;
        if bound(n) >= target {
            break;
        }
    }
    let value = PAdicApprox::new(p, sum, target).reduced();
    Ok(PAdicAnalyticValue { value, truncation_valuation: bound(n) })
}

/// `sin t`, to the precision of `t`.
pub fn padic_sin(t: &PAdicApprox) -> Result<PAdicAnalyticValue> {
    trig_series(t, 1)
}

/// `cos t`, to the precision of `t`.
pub fn padic_cos(t: &PAdicApprox) -> Result<PAdicAnalyticValue> {
    trig_series(t, 0)
}

/// `tan t = sin t / cos t`; `cos t` is a unit on the domain.
pub fn padic_tan(t: &PAdicApprox) -> Result<PAdicAnalyticValue> {
    let s = padic_sin(t)?;
    let c = padic_cos(t)?;
    let value = s.value.checked_div(&c.value)?.reduced();
    Ok(PAdicAnalyticValue { value, truncation_valuation: s.truncation_valuation.min(c.truncation_valuation) })
}

/// The pieces of `K_t` that do not depend on `x, y`: `sin t`, `2 tan t`,
/// and the constant `λ_p(2 sin t) |sin t|^{-1/2}`.
struct KernelData {
    sin: PAdicApprox,
    two_tan: PAdicApprox,
    constant: Cyclotomic,
}

fn kernel_data(t: &PAdicApprox) -> Result<KernelData> {
    let p = t.prime();
    let sin = padic_sin(t)?.value;
    let vs = sin.valuation().ok_or(Error::Zero("sin t vanishes at the working precision"))?;
    // λ_p needs the unit part of 2 sin t mod p (mod 8 at 2).
    let digits = if p.get() == 2 { 3 } else { 1 };
    if sin.precision() - vs < digits {
        return Err(Error::Precision { needed: vs + digits, available: sin.precision() });
    }
    let lam = lambda_p(p, &(sin.approximant() * int(2)))?;
    let constant = Cyclotomic::sqrt_prime_power(p, vs).rotate(&lam);
    let two_tan = padic_tan(t)?.value.scale(&int(2));
    Ok(KernelData { sin, two_tan, constant })
}

/// `K_t(x, y)` at a prime. The character only sees the fractional part of
/// its argument, so finite precision suffices once the argument is known
/// modulo `Z_p`; otherwise a precision error names the deficit.
pub fn kernel_kt_p(t: &PAdicApprox, x: &PAdicApprox, y: &PAdicApprox) -> Result<Cyclotomic> {
    let p = t.prime();
    let k = kernel_data(t)?;
    let cross = (x * y).checked_div(&k.sin)?;
    let square = (&(x * x) + &(y * y)).checked_div(&k.two_tan)?;
    let arg = &cross - &square;
    let frac = arg.frac_part()?;
    Ok(k.constant.rotate(&chi_p(&frac, p)))
}

/// `max_x |∫ K_t(x, y) ψ(y) dy - χ_p(E t) ψ(x)|` over the samples.
///
/// The integral is `χ_p(-x²/2tan t) λ |sin t|^{-1/2} ∫ χ_p(a y² + b y) ψ(y) dy`
/// with `a = -1/(2 tan t)` and `b = x / sin t`, evaluated exactly by the
/// sphere integrator for the rational approximants. The approximants must
/// be precise enough that the integrand does not depend on the truncation.
pub fn eigen_check(t: &PAdicApprox, psi: &PAdicTestFunction, energy: &Rational, samples: &[Rational]) -> Result<f64> {
    let p = t.prime();
    if psi.prime() != p {
        return Err(Error::InvalidArgument(alloc::format!("state on Q_{} checked at p = {p}", psi.prime())));
    }
    let k = kernel_data(t)?;
    let big = i64::MAX / 4;
    let one = PAdicApprox::new(p, Rational::one(), big);
    let a = one.checked_div(&k.two_tan)?.scale(&int(-1));
    let radius = psi.terms().iter().map(|tm| tm.ball().min_valuation()).min().unwrap_or(0);
    if a.precision() + 2 * radius < 0 {
        return Err(Error::Precision { needed: -2 * radius - a.precision() + t.precision(), available: t.precision() });
    }
    let et = t.scale(energy);
    let rotation = chi_p(&et.frac_part()?, p);
    let plan = SphereDecompositionPlan::default();
    let mut worst: f64 = 0.0;
    for x in samples {
        let xa = PAdicApprox::new(p, x.clone(), big);
        let b = xa.checked_div(&k.sin)?;
        let c = (&xa * &xa).checked_div(&k.two_tan)?;
        if b.precision() + radius < 0 || c.precision() < 0 {
            return Err(Error::Precision { needed: t.precision() + 1 - b.precision().min(c.precision()).min(0), available: t.precision() });
        }
        let inner = integrate_qp(p, Integrand::Weighted { f: psi, a: a.approximant(), b: b.approximant() }, &plan)?.value;
        let lhs = (&k.constant * &inner).rotate(&chi_p(&(-c.approximant()), p));
        let rhs = psi.evaluate(x).rotate(&rotation);
        let diff = (&lhs - &rhs).reduced();
        let dev = if diff.is_zero() { 0.0 } else { diff.to_complex().norm() };
        worst = worst.max(dev);
    }
    Ok(worst)
}

/// Outcome of the vacuum self-duality check.
#[derive(Debug, Clone, PartialEq)]
pub struct VacuumFourierReport {
    /// `F[Ω_p] = Ω_p` exactly, per prime.
    pub padic: Vec<(Prime, bool)>,
    /// Sup over the grid of `|F[ψ_∞] - ψ_∞|` with `F` by quadrature.
    pub real_sup_error: f64,
}

impl VacuumFourierReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.padic.iter().all(|(_, ok)| *ok) && self.real_sup_error < tol
    }
}

/// Quadrature transform of the real factor of the degree-`n` state at `ξ`.
pub fn real_state_fourier(n: u32, xi: f64) -> Result<Complex64> {
    let cfg = QuadratureConfig::for_radius(4.5 + 0.35 * n as f64);
    let f = |x: f64| chi_inf(xi * x) * state_norm(n) * hermite_function(n, x);
    Ok(integrate_real(&f, &cfg)?.value)
}

pub fn vacuum_fourier_check() -> Result<VacuumFourierReport> {
    let mut padic = Vec::new();
    for q in [2u64, 3, 5, 7, 11] {
        let p = Prime::new(q)?;
        let om = PAdicTestFunction::omega(p);
        padic.push((p, om.fourier().equals(&om)?));
    }
    let mut sup: f64 = 0.0;
    for i in 0..1000 {
        let xi = -5.0 + 10.0 * i as f64 / 999.0;
        let got = real_state_fourier(0, xi)?;
        sup = sup.max((got - state_norm(0) * hermite_function(0, xi)).norm());
    }
    Ok(VacuumFourierReport { padic, real_sup_error: sup })
}

/// `F[ψ_n](ξ) / ψ_n(ξ)` measured by quadrature at a point where `ψ_n(ξ) ≠ 0`.
pub fn fourier_multiplier_probe(n: u32, xi: f64) -> Result<Complex64> {
    let direct = state_norm(n) * hermite_function(n, xi);
    if direct.abs() < 1e-8 {
        return Err(Error::InvalidArgument(alloc::format!("ψ_{n} vanishes near {xi}")));
    }
    Ok(real_state_fourier(n, xi)? / direct)
}

/// Largest entry of `|G - I|` for the Gram matrix of the real factors of
/// `ψ_0 … ψ_max`, by quadrature.
pub fn real_state_orthonormality(max_degree: u32) -> Result<f64> {
    if max_degree > 12 {
        return Err(Error::InvalidArgument("orthonormality is checked up to degree 12".into()));
    }
    let cfg = QuadratureConfig::for_radius(4.5 + 0.35 * max_degree as f64);
    let mut worst: f64 = 0.0;
    for n in 0..=max_degree {
        for m in n..=max_degree {
            let f = |x: f64| Complex64::new(state_norm(n) * hermite_function(n, x) * state_norm(m) * hermite_function(m, x), 0.0);
            let g = integrate_real(&f, &cfg)?.value.re;
            let want = if n == m { 1.0 } else { 0.0 };
            worst = worst.max((g - want).abs());
        }
    }
    Ok(worst)
}

/// Pairing `K_0(x, ·) = δ(x - ·)` against `φ` next to the direct value
/// `φ(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaKernelReport {
    pub paired: Complex64,
    pub direct: Complex64,
}

impl DeltaKernelReport {
    pub fn deviation(&self) -> f64 {
        (self.paired - self.direct).norm()
    }
}

pub fn delta_kernel_check(phi: &SchwartzBruhat, x: &Adele) -> Result<DeltaKernelReport> {
    let paired = delta_at(x.clone()).pair(phi)?.value;
    let direct = phi.evaluate(x)?;
    Ok(DeltaKernelReport { paired, direct })
}

/// `K_t(x, y)` on the real line.
pub fn kernel_kt_real(t: f64, x: f64, y: f64) -> Result<Complex64> {
    let s = libm::sin(t);
    if s.abs() < 1e-12 {
        return Err(Error::Zero("sin t = 0"));
    }
    let lam = if s > 0.0 { lambda_inf(&int(1))? } else { lambda_inf(&int(-1))? };
    let arg = x * y / s - (x * x + y * y) / (2.0 * libm::tan(t));
    Ok(lam.to_complex() * chi_inf(arg) / libm::sqrt(s.abs()))
}

/// `(U(t) φ)(x) = ∫ K_t(x, y) φ(y) dy` by quadrature.
pub fn evolve_real(phi: &RealTestFunction, t: f64, x: f64) -> Result<Complex64> {
    let r = phi.decay_radius().ok_or_else(|| Error::InvalidArgument("real factor has no decay bound".into()))?;
    let s = libm::sin(t);
    let a = 1.0 / (2.0 * libm::tan(t)).abs();
    let freq = 2.0 * a * r + (x / s).abs();
    let mut cfg = QuadratureConfig::for_radius(r);
    cfg.panels = cfg.panels.max((4.0 * r * (1.0 + freq)) as usize);
    cfg.budget = 1e-11;
    let k0 = kernel_kt_real(t, x, 0.0)?;
    let f = |y: f64| chi_inf(x * y / s - y * y / (2.0 * libm::tan(t))) * phi.evaluate(y);
    Ok(k0 * integrate_real(&f, &cfg)?.value)
}

/// `| ‖U(t) ψ_0‖² - ‖ψ_0‖² |`, both by quadrature.
pub fn unitarity_probe(t: f64) -> Result<f64> {
    let psi = RealTestFunction::hermite(0, Complex64::new(state_norm(0), 0.0));
    let rule_cfg = QuadratureConfig { radius: 6.0, panels: 96, order: 20, budget: 1e-9 };
    let evolved = |x: f64| evolve_real(&psi, t, x).map(|v| Complex64::new(v.norm_sqr(), 0.0)).unwrap_or(Complex64::new(f64::NAN, 0.0));
    let lhs = integrate_real(&evolved, &rule_cfg)?.value.re;
    let rhs = integrate_real(&|x| Complex64::new(psi.evaluate(x).norm_sqr(), 0.0), &rule_cfg)?.value.re;
    Ok((lhs - rhs).abs())
}

/// Measured action of `U(t)` on the real vacuum: the ratio
/// `(U(t)ψ_0)(x) / ψ_0(x)` at a few points, its spread, and the energy
/// `E` with `ratio = χ_∞(E t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VacuumPhase {
    pub ratio: Complex64,
    pub spread: f64,
    pub energy: f64,
}

pub fn real_vacuum_phase(t: f64) -> Result<VacuumPhase> {
    let psi = RealTestFunction::hermite(0, Complex64::new(state_norm(0), 0.0));
    let xs = [0.0, 0.3, -0.7, 1.1];
    let mut ratios = Vec::new();
    for &x in &xs {
        ratios.push(evolve_real(&psi, t, x)? / psi.evaluate(x));
    }
    let ratio = ratios[0];
    let spread = ratios.iter().map(|r| (r - ratio).norm()).fold(0.0, f64::max);
    // χ_∞(Et) = e^{-2πiEt}
    let energy = -ratio.arg() / (2.0 * PI * t);
    Ok(VacuumPhase { ratio, spread, energy })
}

/// The unit ball `Z_p` as a convenience for Ω-tail states.
pub fn omega_state(p: Prime) -> PAdicTestFunction {
    PAdicTestFunction::indicator(Ball::unit(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruhat::{oscillator_state, vacuum};
    use crate::qcore::{principal_adele, ratio, valuation};
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn approx(q: u64, t: Rational, n: i64) -> PAdicApprox {
        PAdicApprox::new(p(q), t, n)
    }

    #[test]
    fn sin_examples() {
        let s = padic_sin(&approx(5, int(0), 10)).unwrap();
        assert!(s.value.is_zero_at_precision());
        let s = padic_sin(&approx(5, int(5), 3)).unwrap();
        assert_eq!(s.value, approx(5, int(5), 3));
        assert!(s.truncation_valuation >= 3);
        assert!(padic_sin(&approx(3, int(1), 5)).is_err());
        assert!(padic_sin(&approx(2, int(2), 5)).is_err());
        assert!(padic_sin(&approx(2, int(4), 5)).is_ok());
    }

    proptest! {
        #[test]
        fn trig_identities(
            q in prop::sample::select(vec![2u64, 3, 5, 7, 11]),
            u in -200i64..200, extra in 0i64..3, n in 1i64..=12,
        ) {
            let pq = p(q);
            let t = int(u) * pq.rpow(trig_domain(pq) + extra);
            let ta = approx(q, t.clone(), n.max(trig_domain(pq) + extra + 1));
            let s = padic_sin(&ta).unwrap().value;
            let c = padic_cos(&ta).unwrap().value;
            let one = approx(q, int(1), ta.precision());
            prop_assert_eq!(&(&s * &s) + &(&c * &c), one);
            if u != 0 {
                prop_assert_eq!(s.valuation(), valuation(&t, pq).finite().filter(|v| *v < ta.precision()));
            }
            let t2 = ta.scale(&int(2));
            let s2 = padic_sin(&t2).unwrap().value;
            let twice = (&s * &c).scale(&int(2));
            prop_assert_eq!(s2, twice);
        }
    }

    #[test]
    fn kernel_examples() {
        let t = approx(5, int(5), 12);
        let zero = approx(5, int(0), 12);
        let k = kernel_kt_p(&t, &zero, &zero).unwrap();
        let want = Cyclotomic::sqrt_prime_power(p(5), 1).rotate(&lambda_p(p(5), &int(10)).unwrap());
        assert_eq!(k, want);
        let x = approx(5, int(25), 12);
        let k2 = kernel_kt_p(&t, &x, &approx(5, int(3), 12)).unwrap();
        assert!((k2.to_complex().norm() - 5f64.sqrt()).abs() < 1e-12);
        // v(2 tan t) = 1, so x must be known at least modulo 5
        assert!(kernel_kt_p(&t, &approx(5, int(1), 1), &zero).is_ok());
        let coarse = approx(5, int(1), 0);
        assert!(matches!(kernel_kt_p(&t, &coarse, &zero), Err(Error::Precision { .. })));
    }

    #[test]
    fn vacuum_invariance() {
        for q in [3u64, 5, 7] {
            let t = approx(q, int(q as i64), 20);
            let qi = q as i64;
            let samples = [int(0), int(1), ratio(1, qi), int(qi), ratio(2, qi), int(qi + 1)];
            let dev = eigen_check(&t, &omega_state(p(q)), &int(0), &samples).unwrap();
            assert_eq!(dev, 0.0, "p = {q}");
        }
    }

    #[test]
    fn eigen_check_sees_wrong_energy() {
        let t = approx(5, int(5), 20);
        let dev = eigen_check(&t, &omega_state(p(5)), &ratio(1, 25), &[int(0)]).unwrap();
        assert!(dev > 0.5);
    }

    #[test]
    fn vacuum_fourier() {
        let r = vacuum_fourier_check().unwrap();
        assert!(r.holds(1e-10), "{r:?}");
        let m = fourier_multiplier_probe(1, 0.4).unwrap();
        assert!((m - Complex64::new(0.0, -1.0)).norm() < 1e-10);
    }

    #[test]
    fn orthonormal_states() {
        assert!(real_state_orthonormality(8).unwrap() < 1e-9);
        assert!(real_state_orthonormality(13).is_err());
    }

    #[test]
    fn delta_kernel() {
        let psi = SchwartzBruhat::single(vacuum());
        let r = delta_kernel_check(&psi, &principal_adele(&int(0))).unwrap();
        assert!((r.paired - libm::pow(2.0, 0.25)).norm() < 1e-15 && r.deviation() == 0.0);
        let odd = SchwartzBruhat::single(oscillator_state(3));
        let r = delta_kernel_check(&odd, &principal_adele(&int(0))).unwrap();
        assert_eq!(r.paired, Complex64::new(0.0, 0.0));
        let x = principal_adele(&ratio(2, 3));
        let r = delta_kernel_check(&psi.add(&odd), &x).unwrap();
        assert!(r.deviation() < 1e-15);
    }

    #[test]
    fn real_unitarity_and_phase() {
        for t in [0.7, 1.3, 2.2] {
            assert!(unitarity_probe(t).unwrap() < 1e-8, "t = {t}");
            let ph = real_vacuum_phase(t).unwrap();
            assert!(ph.spread < 1e-8 && (ph.ratio.norm() - 1.0).abs() < 1e-8, "t = {t}: {ph:?}");
        }
    }
}
