use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::{frac_part, valuation, Prime, Rational, Valuation};
use crate::error::{Error, Result};

/// A p-adic number known modulo `p^precision`, carried by a rational
/// approximant.
///
/// Arithmetic never claims more precision than the inputs justify: sums keep
/// `min(N_a, N_b)`, products keep `min(N_a + v_b, N_b + v_a)`.
#[derive(Debug, Clone)]
pub struct PAdicApprox {
    prime: Prime,
    approximant: Rational,
    precision: i64,
}

impl PAdicApprox {
    pub fn new(prime: Prime, approximant: Rational, precision: i64) -> Self {
        PAdicApprox { prime, approximant, precision }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn approximant(&self) -> &Rational {
        &self.approximant
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// Valuation if it is determined at this precision, `None` if the value
    /// is indistinguishable from zero.
    pub fn valuation(&self) -> Option<i64> {
        match valuation(&self.approximant, self.prime) {
            Valuation::Finite(v) if v < self.precision => Some(v),
            _ => None,
        }
    }

    /// Lower bound for the valuation that is always valid.
    pub fn valuation_floor(&self) -> i64 {
        self.valuation().unwrap_or(self.precision)
    }

    /// Digits of the unit part that are known: `precision - valuation`.
    pub fn relative_precision(&self) -> Option<i64> {
        self.valuation().map(|v| self.precision - v)
    }

    pub fn is_zero_at_precision(&self) -> bool {
        self.valuation().is_none()
    }

    /// Replaces the approximant by its canonical representative in
    /// `[0, p^N)` with a pure p-power denominator.
    pub fn reduced(&self) -> Self {
        let pn = self.prime.rpow(self.precision);
        let rep = frac_part(&(&self.approximant / &pn), self.prime) * pn;
        PAdicApprox::new(self.prime, rep, self.precision)
    }

    /// `{x}_p`, available once the value is known modulo `Z_p`.
    pub fn frac_part(&self) -> Result<Rational> {
        if self.precision < 0 {
            return Err(Error::Precision { needed: 0, available: self.precision });
        }
        Ok(frac_part(&self.approximant, self.prime))
    }

    pub fn with_precision(&self, precision: i64) -> Self {
        PAdicApprox::new(self.prime, self.approximant.clone(), precision.min(self.precision))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let vc = valuation(c, self.prime).finite().unwrap_or(0);
        let n = if c.is_zero() { i64::MAX / 4 } else { self.precision + vc };
        PAdicApprox::new(self.prime, &self.approximant * c, n)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        self.same_prime(rhs);
        let vb = rhs.valuation().ok_or(Error::Precision { needed: rhs.precision + 1, available: rhs.precision })?;
        let va = self.valuation_floor();
        let n = (self.precision - vb).min(rhs.precision - 2 * vb + va);
        Ok(PAdicApprox::new(self.prime, &self.approximant / &rhs.approximant, n))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = PAdicApprox::new(self.prime, Rational::from_integer(1.into()), i64::MAX / 4);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn same_prime(&self, other: &Self) {
        assert_eq!(self.prime, other.prime, "p-adic values at different primes");
    }
}

impl PartialEq for PAdicApprox {
    /// Equal iff the difference vanishes to the lesser precision.
    fn eq(&self, other: &Self) -> bool {
        self.prime == other.prime
            && valuation(&(&self.approximant - &other.approximant), self.prime)
                .at_least(self.precision.min(other.precision))
    }
}

impl<'a> Add<&'a PAdicApprox> for &'a PAdicApprox {
    type Output = PAdicApprox;
    fn add(self, rhs: &PAdicApprox) -> PAdicApprox {
        self.same_prime(rhs);
        PAdicApprox::new(self.prime, &self.approximant + &rhs.approximant, self.precision.min(rhs.precision))
    }
}

impl<'a> Sub<&'a PAdicApprox> for &'a PAdicApprox {
    type Output = PAdicApprox;
    fn sub(self, rhs: &PAdicApprox) -> PAdicApprox {
        self.same_prime(rhs);
        PAdicApprox::new(self.prime, &self.approximant - &rhs.approximant, self.precision.min(rhs.precision))
    }
}

impl<'a> Mul<&'a PAdicApprox> for &'a PAdicApprox {
    type Output = PAdicApprox;
    fn mul(self, rhs: &PAdicApprox) -> PAdicApprox {
        self.same_prime(rhs);
        let n = (self.precision + rhs.valuation_floor()).min(rhs.precision + self.valuation_floor());
        PAdicApprox::new(self.prime, &self.approximant * &rhs.approximant, n)
    }
}

impl Neg for &PAdicApprox {
    type Output = PAdicApprox;
    fn neg(self) -> PAdicApprox {
        PAdicApprox::new(self.prime, -&self.approximant, self.precision)
    }
}

impl fmt::Display for PAdicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", super::format_rational(&self.approximant), self.prime, self.precision)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, ratio};
    use super::*;
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn equality_at_precision() {
        let a = PAdicApprox::new(p(5), int(7), 1);
        let b = PAdicApprox::new(p(5), int(2), 3);
        assert_eq!(a, b);
        assert_ne!(PAdicApprox::new(p(5), int(7), 2), b);
    }

    #[test]
    fn product_precision_rule() {
        // 5 + O(5^3) times 1/5 + O(5^2): min(3 - 1, 2 + 1) = 2
        let a = PAdicApprox::new(p(5), int(5), 3);
        let b = PAdicApprox::new(p(5), ratio(1, 5), 2);
        assert_eq!((&a * &b).precision(), 2);
        assert_eq!((&a + &b).precision(), 2);
    }

    #[test]
    fn reduce_keeps_class() {
        let a = PAdicApprox::new(p(3), ratio(-7, 2), 4);
        let r = a.reduced();
        assert_eq!(a, r);
        assert!(r.approximant() >= &int(0) && r.approximant() < &int(81));
    }

    #[test]
    fn division_needs_known_valuation() {
        let a = PAdicApprox::new(p(3), int(1), 4);
        let z = PAdicApprox::new(p(3), int(27), 2);
        assert!(a.checked_div(&z).is_err());
        let q = a.checked_div(&PAdicApprox::new(p(3), int(3), 4)).unwrap();
        assert_eq!(q.precision(), 2);
        assert_eq!(q.valuation(), Some(-1));
    }

    // Interval-style check: perturbing the inputs anywhere inside their
    // precision window never moves the result outside the claimed window.
    proptest! {
        #[test]
        fn precision_bounds_hold(
            an in -500i64..500, ad in 1i64..60, bn in -500i64..500, bd in 1i64..60,
            na in -2i64..5, nb in -2i64..5, ea in -20i64..20, eb in -20i64..20,
        ) {
            let q = p(3);
            let a = PAdicApprox::new(q, ratio(an, ad), na);
            let b = PAdicApprox::new(q, ratio(bn, bd), nb);
            let a2 = PAdicApprox::new(q, a.approximant() + int(ea) * q.rpow(na), na);
            let b2 = PAdicApprox::new(q, b.approximant() + int(eb) * q.rpow(nb), nb);
            let s = &a + &b;
            let s2 = &a2 + &b2;
            prop_assert!(valuation(&(s.approximant() - s2.approximant()), q).at_least(s.precision()));
            let m = &a * &b;
            let m2 = &a2 * &b2;
            prop_assert!(valuation(&(m.approximant() - m2.approximant()), q).at_least(m.precision()));
        }
    }
}
