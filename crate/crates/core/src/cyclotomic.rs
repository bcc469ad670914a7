//! Exact cyclotomic numbers `Σ c_j e^{2πi q_j}` with rational `c_j` and
//! rational phases `q_j`.
//!
//! Every value produced by the p-adic integrators lives here: Haar measures
//! are rational, characters are roots of unity, and the `|2a|^{-1/2}` factors
//! of Gauss integrals are square roots of primes, which are themselves Gauss
//! sums. Equality is decided exactly by reducing to the standard basis of
//! `Q(ζ_N)`, prime by prime.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::characters::UnitPhase;
use crate::qcore::{self, frac_part, int, int_valuation, prime_factors, to_f64, Prime, Rational};

#[derive(Clone, Default)]
pub struct Cyclotomic {
    terms: BTreeMap<UnitPhase, Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic::default()
    }

    pub fn one() -> Self {
        Cyclotomic::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Cyclotomic::term(r, UnitPhase::one())
    }

    pub fn from_phase(z: UnitPhase) -> Self {
        Cyclotomic::term(Rational::one(), z)
    }

    pub fn term(c: Rational, z: UnitPhase) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(z, c);
        }
        Cyclotomic { terms }
    }

    /// `scale · Σ count · e^{2πi r/denom}` over a histogram of residues `r`.
    pub(crate) fn from_histogram(hist: impl IntoIterator<Item = (u64, i64)>, denom: &BigInt, scale: &Rational) -> Self {
        let mut out = Cyclotomic::zero();
        for (r, c) in hist {
            if c != 0 {
                let phase = UnitPhase::new(Rational::new(BigInt::from(r), denom.clone()));
                out.add_term(phase, scale * int(c));
            }
        }
        out
    }

    pub fn add_term(&mut self, z: UnitPhase, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(z) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&UnitPhase, &Rational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Cyclotomic::zero();
        }
        Cyclotomic { terms: self.terms.iter().map(|(z, v)| (z.clone(), v * c)).collect() }
    }

    pub fn rotate(&self, z: &UnitPhase) -> Self {
        Cyclotomic { terms: self.terms.iter().map(|(w, v)| (w * z, v.clone())).collect() }
    }

    pub fn conj(&self) -> Self {
        Cyclotomic { terms: self.terms.iter().map(|(z, v)| (z.conj(), v.clone())).collect() }
    }

    pub fn to_complex(&self) -> Complex64 {
        self.terms.iter().fold(Complex64::new(0.0, 0.0), |acc, (z, c)| acc + z.to_complex() * to_f64(c))
    }

    /// Canonical form in the basis of `Q(ζ_N)` where `N` is the lcm of all
    /// phase denominators: for each prime `p` with `p^E ‖ N`, no phase has
    /// top p-digit equal to `p - 1` at level `E`.
    pub fn reduced(&self) -> Self {
        let mut terms = self.terms.clone();
        let mut dens: Vec<BigInt> = terms.keys().map(|z| z.phase().denom().clone()).collect();
        dens.sort();
        dens.dedup();
        let mut primes: Vec<Prime> = Vec::new();
        for d in &dens {
            primes.extend(prime_factors(d).expect("phase denominators are factorable"));
        }
        primes.sort();
        primes.dedup();

        for p in primes {
            let level = terms.keys().map(|z| int_valuation(z.phase().denom(), p)).max().unwrap_or(0);
            if level == 0 {
                continue;
            }
            let pe = p.rpow(level);
            let top = num_traits::pow(p.to_bigint(), (level - 1) as usize);
            let last = BigInt::from(p.get() - 1);
            let mut out: BTreeMap<UnitPhase, Rational> = BTreeMap::new();
            for (z, c) in terms {
                let k = (frac_part(z.phase(), p) * &pe).to_integer();
                if k / &top == last {
                    for j in 0..p.get() - 1 {
                        let shift = qcore::ratio((p.get() - 1 - j) as i64, p.get() as i64);
                        let w = &z - &shift;
                        *out.entry(w).or_insert_with(Rational::zero) -= &c;
                    }
                } else {
                    *out.entry(z).or_insert_with(Rational::zero) += c;
                }
            }
            out.retain(|_, c| !c.is_zero());
            terms = out;
        }
        Cyclotomic { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() || self.reduced().terms.is_empty()
    }

    /// The rational value, if this number is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        let r = self.reduced();
        match r.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (z, c) = r.terms.iter().next().unwrap();
                z.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// `√p` as an exact cyclotomic number (a quadratic Gauss sum).
    pub fn sqrt_prime(p: Prime) -> Self {
        if p.get() == 2 {
            return Cyclotomic::from_phase(UnitPhase::from_ratio(1, 8)) + Cyclotomic::from_phase(UnitPhase::from_ratio(-1, 8));
        }
        let pp = p.get() as i64;
        let mut g = Cyclotomic::zero();
        for x in 1..pp {
            g.add_term(UnitPhase::from_ratio(x, pp), int(legendre(x, p)));
        }
        if pp % 4 == 1 {
            g
        } else {
            // g = i√p
            g.rotate(&UnitPhase::from_ratio(3, 4))
        }
    }

    /// `p^{e/2}` exactly.
    pub fn sqrt_prime_power(p: Prime, e: i64) -> Self {
        let half = e.div_euclid(2);
        let base = Cyclotomic::from_rational(p.rpow(half));
        if e.rem_euclid(2) == 0 {
            base
        } else {
            &base * &Cyclotomic::sqrt_prime(p)
        }
    }

    /// `√|r|` for a nonzero rational, from its factorization.
    pub fn sqrt_abs_rational(r: &Rational) -> Self {
        let mut acc = Cyclotomic::one();
        for p in qcore::support(r).expect("factorable rational") {
            let v = qcore::valuation(r, p).finite().expect("nonzero");
            acc = &acc * &Cyclotomic::sqrt_prime_power(p, v);
        }
        acc
    }
}

/// Legendre symbol `(x/p)` for odd `p`.
pub fn legendre(x: i64, p: Prime) -> i64 {
    let pp = p.get() as i64;
    let x = x.rem_euclid(pp);
    if x == 0 {
        return 0;
    }
    let e = (pp - 1) / 2;
    let r = BigInt::from(x).modpow(&BigInt::from(e), &BigInt::from(pp)).to_i64().unwrap();
    if r == 1 {
        1
    } else {
        -1
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (z, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({})·{}", qcore::format_rational(c), z)?;
        }
        Ok(())
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let mut out = self.clone();
        for (z, c) in &rhs.terms {
            out.add_term(z.clone(), c.clone());
        }
        out
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { terms: self.terms.iter().map(|(z, c)| (z.clone(), -c)).collect() }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let mut out = Cyclotomic::zero();
        for (z, c) in &self.terms {
            for (w, d) in &rhs.terms {
                out.add_term(z * w, c * d);
            }
        }
        out
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::ratio;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for n in [2i64, 3, 4, 6, 8, 9, 12, 25, 30] {
            let mut s = Cyclotomic::zero();
            for k in 0..n {
                s.add_term(UnitPhase::from_ratio(k, n), int(1));
            }
            assert!(s.is_zero(), "n = {n}");
        }
        let mut s = Cyclotomic::zero();
        for k in 0..5 {
            s.add_term(UnitPhase::from_ratio(k, 6), int(1));
        }
        assert!(!s.is_zero());
    }

    #[test]
    fn exact_square_roots() {
        for q in [2u64, 3, 5, 7, 11, 13] {
            let r = Cyclotomic::sqrt_prime(p(q));
            assert_eq!(&r * &r, Cyclotomic::from_rational(int(q as i64)), "p = {q}");
            assert!((r.to_complex().re - (q as f64).sqrt()).abs() < 1e-12);
            assert!(r.to_complex().im.abs() < 1e-12);
        }
        let s = Cyclotomic::sqrt_abs_rational(&ratio(-27, 8));
        assert_eq!(&s * &s, Cyclotomic::from_rational(ratio(27, 8)));
    }

    #[test]
    fn rational_detection() {
        let i = Cyclotomic::from_phase(UnitPhase::from_ratio(1, 4));
        assert_eq!((&i * &i).as_rational(), Some(int(-1)));
        assert_eq!(i.as_rational(), None);
        let mut z = Cyclotomic::zero();
        z.add_term(UnitPhase::from_ratio(1, 3), int(1));
        z.add_term(UnitPhase::from_ratio(2, 3), int(1));
        assert_eq!(z.as_rational(), Some(int(-1)));
    }

    #[test]
    fn reduction_matches_numerics() {
        let mut z = Cyclotomic::zero();
        for (k, n, c) in [(1, 8, 3), (5, 12, -2), (7, 9, 1), (2, 5, 4), (3, 4, 1)] {
            z.add_term(UnitPhase::from_ratio(k, n), int(c));
        }
        assert!((z.to_complex() - z.reduced().to_complex()).norm() < 1e-12);
    }
}
