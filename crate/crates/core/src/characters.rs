//! Additive characters `χ_∞(x) = e^{-2πix}`, `χ_p(x) = e^{2πi{x}_p}` and the
//! multiplicative character `π_α(λ) = |λ|^α` on ideles.
//!
//! p-adic characters return exact phases; conversion to floating point only
//! happens at the boundary.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qcore::{self, frac_part, padic_norm, to_f64, Idele, Prime, Rational};

/// `e^{2πi q}` with `q` reduced into `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitPhase(Rational);

impl UnitPhase {
    pub fn new(q: Rational) -> Self {
        let fl = q.floor();
        UnitPhase(q - fl)
    }

    pub fn one() -> Self {
        UnitPhase(Rational::zero())
    }

    /// `e^{2πi n/d}`.
    pub fn from_ratio(n: i64, d: i64) -> Self {
        UnitPhase::new(qcore::ratio(n, d))
    }

    pub fn phase(&self) -> &Rational {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_zero()
    }

    pub fn conj(&self) -> Self {
        UnitPhase::new(-&self.0)
    }

    /// Multiplicative order (the reduced denominator of the phase).
    pub fn order(&self) -> num_bigint::BigInt {
        self.0.denom().clone()
    }

    pub fn to_complex(&self) -> Complex64 {
        let t = 2.0 * core::f64::consts::PI * to_f64(&self.0);
        Complex64::new(libm::cos(t), libm::sin(t))
    }

    pub fn pow(&self, k: i64) -> Self {
        UnitPhase::new(&self.0 * qcore::int(k))
    }
}

impl Mul for &UnitPhase {
    type Output = UnitPhase;
    // multiplying e(θ) adds the angles
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &UnitPhase) -> UnitPhase {
        UnitPhase::new(&self.0 + &rhs.0)
    }
}

impl Mul for UnitPhase {
    type Output = UnitPhase;
    fn mul(self, rhs: UnitPhase) -> UnitPhase {
        &self * &rhs
    }
}

impl fmt::Display for UnitPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^(2πi·{})", qcore::format_rational(&self.0))
    }
}

/// `χ_p(x) = exp(2πi {x}_p)`.
pub fn chi_p(x: &Rational, p: Prime) -> UnitPhase {
    UnitPhase(frac_part(x, p))
}

/// `χ_∞(x) = exp(-2πi x)` for a real argument.
pub fn chi_inf(x: f64) -> Complex64 {
    let t = -2.0 * core::f64::consts::PI * x;
    Complex64::new(libm::cos(t), libm::sin(t))
}

/// `χ_∞(x)` for a rational argument, as an exact phase.
pub fn chi_inf_exact(x: &Rational) -> UnitPhase {
    UnitPhase::new(-x)
}

/// `χ(r) = χ_∞(r) ∏_{p | den r} χ_p(r)` for the principal adele `r`, formed
/// by exact phase addition. All other factors are 1.
pub fn chi_principal_phase(r: &Rational) -> UnitPhase {
    let mut acc = chi_inf_exact(r);
    for p in qcore::denominator_primes(r).expect("factorable denominator") {
        acc = &acc * &chi_p(r, p);
    }
    acc
}

pub fn chi_principal(r: &Rational) -> Complex64 {
    chi_principal_phase(r).to_complex()
}

/// `π_α(λ) = |λ_∞|^α ∏_p |λ_p|_p^α`; tail components contribute 1.
pub fn pi_alpha(lambda: &Idele, alpha: Complex64) -> Result<Complex64> {
    if lambda.real().is_zero() {
        return Err(Error::Zero("multiplicative character"));
    }
    let mut log_norm = libm::log(libm::fabs(to_f64(lambda.real())));
    for p in lambda.primes() {
        let n = padic_norm(lambda.exceptional().get(&p).expect("explicit prime"), p);
        if n.is_zero() {
            return Err(Error::Zero("multiplicative character"));
        }
        // |λ_p|_p = p^{-v}, so log is -v log p.
        let v = -log_p_of_power(&n, p);
        log_norm -= v as f64 * libm::log(p.get() as f64);
    }
    Ok((alpha * log_norm).exp())
}

/// Exponent `e` with `n = p^e`.
fn log_p_of_power(n: &Rational, p: Prime) -> i64 {
    let pb = p.to_bigint();
    let (num, den) = (n.numer(), n.denom());
    let count = |mut m: num_bigint::BigInt| {
        let mut e = 0i64;
        while m > num_bigint::BigInt::one() {
            let (q, r) = m.div_rem(&pb);
            debug_assert!(r.is_zero());
            m = q;
            e += 1;
        }
        e
    };
    count(num.clone()) - count(den.clone())
}

// Phase arithmetic used by the exact integrators.
impl Add<&Rational> for &UnitPhase {
    type Output = UnitPhase;
    fn add(self, rhs: &Rational) -> UnitPhase {
        UnitPhase::new(&self.0 + rhs)
    }
}

impl Sub<&Rational> for &UnitPhase {
    type Output = UnitPhase;
    fn sub(self, rhs: &Rational) -> UnitPhase {
        UnitPhase::new(&self.0 - rhs)
    }
}

impl Neg for &UnitPhase {
    type Output = UnitPhase;
    fn neg(self) -> UnitPhase {
        self.conj()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{int, principal_idele, ratio};
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn chi_p_examples() {
        assert_eq!(chi_p(&ratio(1, 2), p(2)), UnitPhase::from_ratio(1, 2));
        assert!(close(chi_p(&ratio(1, 2), p(2)).to_complex(), Complex64::new(-1.0, 0.0)));
        assert!(chi_p(&int(7), p(5)).is_one());
        assert_eq!(chi_p(&ratio(1, 3), p(3)), UnitPhase::from_ratio(1, 3));
    }

    #[test]
    fn chi_inf_examples() {
        assert!(close(chi_inf(0.0), Complex64::new(1.0, 0.0)));
        assert!(close(chi_inf(0.5), Complex64::new(-1.0, 0.0)));
        assert!(close(chi_inf(0.25), Complex64::new(0.0, -1.0)));
    }

    #[test]
    fn chi_principal_examples() {
        assert!(chi_principal_phase(&ratio(5, 6)).is_one());
        assert!(chi_principal_phase(&int(7)).is_one());
        assert!(chi_principal_phase(&ratio(-9, 8)).is_one());
        assert!(close(chi_principal(&ratio(5, 6)), Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn pi_alpha_examples() {
        let one = Complex64::new(1.0, 0.0);
        let i32_ = principal_idele(&ratio(3, 2)).unwrap();
        assert!(close(pi_alpha(&i32_, one).unwrap(), one));
        let two = Idele::from_components(int(2), []).unwrap();
        assert!(close(pi_alpha(&two, Complex64::new(2.0, 0.0)).unwrap(), Complex64::new(4.0, 0.0)));
        let ten = principal_idele(&int(10)).unwrap();
        assert!(close(pi_alpha(&ten, Complex64::new(0.5, 1.0)).unwrap(), one));
    }

    fn rat() -> impl Strategy<Value = Rational> {
        (-5000i64..5000, 1i64..5000).prop_map(|(n, d)| ratio(n, d))
    }

    fn nonzero() -> impl Strategy<Value = Rational> {
        (1i64..400, 1i64..400, any::<bool>()).prop_map(|(n, d, neg)| ratio(if neg { -n } else { n }, d))
    }

    // Diagonal tail plus arbitrary overrides at 2 and 3, so every component is known.
    fn idele() -> impl Strategy<Value = Idele> {
        (nonzero(), nonzero(), nonzero(), nonzero()).prop_map(|(real, diag, c2, c3)| {
            let mut ex: alloc::collections::BTreeMap<Prime, Rational> =
                qcore::support(&diag).unwrap().into_iter().map(|q| (q, diag.clone())).collect();
            ex.insert(p(2), c2);
            ex.insert(p(3), c3);
            Idele::new(real, ex, qcore::Tail::Diagonal(diag)).unwrap()
        })
    }

    proptest! {
        #[test]
        fn additivity(x in rat(), y in rat(), q in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
            let q = p(q);
            prop_assert_eq!(chi_p(&(&x + &y), q), &chi_p(&x, q) * &chi_p(&y, q));
        }

        #[test]
        fn principal_triviality(x in rat()) {
            prop_assert!(chi_principal_phase(&x).is_one());
        }

        #[test]
        fn multiplicativity(
            a in idele(), b in idele(), re in 0.1f64..3.0, im in -5.0f64..5.0,
        ) {
            let alpha = Complex64::new(re, im);
            let lhs = pi_alpha(&a.mul(&b).unwrap(), alpha).unwrap();
            let rhs = pi_alpha(&a, alpha).unwrap() * pi_alpha(&b, alpha).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
        }
    }
}
