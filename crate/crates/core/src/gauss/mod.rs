//! Local Gauss integrals `∫ χ_v(a x² + b x) dx = λ_v(a) |2a|_v^{-1/2} χ_v(-b²/4a)`,
//! their adelic product formula, the kernel `K(a, b)` and the `Λ` transform.

mod lambda;
mod transform;

pub use lambda::{calibrate, lambda_from_oracle, lambda_inf, lambda_key, lambda_p, lambda_v, CalibrationCell, Place};
pub use transform::{
    lambda_transform, lambda_transform_inf, lambda_transform_p, lambda_transform_p_kernel,
};

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;

use crate::characters::{chi_inf_exact, chi_p, UnitPhase};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::qcore::{int, support, to_f64, valuation, Adele, Idele, Prime, Rational};

fn nonzero(a: &Rational) -> Result<()> {
    if a.is_zero() {
        Err(Error::Zero("Gauss integral with a = 0"))
    } else {
        Ok(())
    }
}

/// Closed form at a prime, exactly.
pub fn gauss_closed_form_p(p: Prime, a: &Rational, b: &Rational) -> Result<Cyclotomic> {
    nonzero(a)?;
    let v2a = valuation(&(a * int(2)), p).finite().expect("a ≠ 0");
    let phase = &lambda_p(p, a)? * &chi_p(&(-(b * b) / (a * int(4))), p);
    Ok(Cyclotomic::sqrt_prime_power(p, v2a).rotate(&phase))
}

/// Closed form at the real place for rational data, exactly: `|2a|^{-1/2}`
/// is a product of square roots of primes.
pub fn gauss_closed_form_inf_exact(a: &Rational, b: &Rational) -> Result<Cyclotomic> {
    nonzero(a)?;
    let two_a = a * int(2);
    let inv_sqrt = Cyclotomic::sqrt_abs_rational(&two_a.recip());
    let phase = &lambda_inf(a)? * &chi_inf_exact(&(-(b * b) / (a * int(4))));
    Ok(inv_sqrt.rotate(&phase))
}

/// Closed form at the real place in floating point.
pub fn gauss_closed_form_inf(a: f64, b: f64) -> Result<Complex64> {
    if a == 0.0 {
        return Err(Error::Zero("Gauss integral with a = 0"));
    }
    let modulus = 1.0 / libm::sqrt(libm::fabs(2.0 * a));
    let lam = -core::f64::consts::FRAC_PI_4 * a.signum();
    let chi = 2.0 * core::f64::consts::PI * (b * b / (4.0 * a));
    Ok(Complex64::from_polar(modulus, lam + chi))
}

/// Real closed form for rational data in floating point. The phase
/// `b²/4a` is reduced mod 1 before rounding, so large `b²/a` keeps full
/// accuracy.
pub fn gauss_closed_form_inf_rational(a: &Rational, b: &Rational) -> Result<Complex64> {
    nonzero(a)?;
    let modulus = 1.0 / libm::sqrt(libm::fabs(2.0 * to_f64(a)));
    let phase = &lambda_inf(a)? * &chi_inf_exact(&(-(b * b) / (a * int(4))));
    Ok(phase.to_complex() * modulus)
}

/// `∫_{Q_v} χ_v(a x² + b x) dx` from the closed form.
pub fn gauss_integral_v(place: Place, a: &Rational, b: &Rational) -> Result<Complex64> {
    match place {
        Place::Infinity => gauss_closed_form_inf_rational(a, b),
        Place::Finite(p) => Ok(gauss_closed_form_p(p, a, b)?.to_complex()),
    }
}

/// Primes dividing a numerator or denominator of `a` or `b`, and 2. At all
/// other primes `a` is a unit and `b` is integral, so the local integral is 1.
pub fn relevant_primes(a: &Rational, b: &Rational) -> Result<Vec<Prime>> {
    let mut ps = support(a)?;
    ps.extend(support(b)?);
    ps.push(Prime::new(2).expect("2 is prime"));
    ps.sort();
    ps.dedup();
    Ok(ps)
}

/// `∏_v ∫_{Q_v} χ_v(a x² + b x) dx`, in floating point; equals 1.
pub fn product_formula_check(a: &Rational, b: &Rational) -> Result<Complex64> {
    let mut acc = gauss_closed_form_inf_rational(a, b)?;
    for p in relevant_primes(a, b)? {
        acc *= gauss_closed_form_p(p, a, b)?.to_complex();
    }
    Ok(acc)
}

/// The same product formed in exact cyclotomic arithmetic.
pub fn product_formula_exact(a: &Rational, b: &Rational) -> Result<Cyclotomic> {
    let mut acc = gauss_closed_form_inf_exact(a, b)?;
    for p in relevant_primes(a, b)? {
        acc = &acc * &gauss_closed_form_p(p, a, b)?;
    }
    Ok(acc.reduced())
}

/// `λ_∞(a) ∏_p λ_p(a)` as an exact phase. Outside the support of `a` and 2,
/// `a` is a unit at an odd prime and `λ_p(a) = 1`.
pub fn lambda_product_phase(a: &Rational) -> Result<UnitPhase> {
    let mut acc = lambda_inf(a)?;
    for p in relevant_primes(a, &Rational::zero())? {
        acc = &acc * &lambda_p(p, a)?;
    }
    Ok(acc)
}

pub fn lambda_product_check(a: &Rational) -> Result<Complex64> {
    Ok(lambda_product_phase(a)?.to_complex())
}

/// `K(a, b) = ∏_v λ_v(a_v) |2a_v|_v^{-1/2} χ_v(-b_v²/4a_v)`.
///
/// Places outside the explicit primes of `a` and `b` and 2 contribute 1;
/// every explicit place, and 2, needs a known component.
pub fn kernel_k(a: &Idele, b: &Adele) -> Result<Complex64> {
    let mut acc = gauss_closed_form_inf_exact(a.real(), b.real())?;
    let mut primes: Vec<Prime> = a.primes().chain(b.primes()).collect();
    primes.push(Prime::new(2).expect("2 is prime"));
    primes.sort();
    primes.dedup();
    for p in primes {
        let ap = a.component(p).ok_or(Error::MissingComponent(p.get()))?;
        let bp = b.component(p).ok_or(Error::MissingComponent(p.get()))?;
        acc = &acc * &gauss_closed_form_p(p, &ap, &bp)?;
    }
    Ok(acc.to_complex())
}

/// `true` when `|z - 1| ≤ tol`.
pub fn is_unit_one(z: Complex64, tol: f64) -> bool {
    (z - Complex64::new(1.0, 0.0)).norm() <= tol
}
