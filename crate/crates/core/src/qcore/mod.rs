//! Exact rationals, p-adic valuations and norms, canonical digit expansions,
//! and the adele/idele data model.

mod adele;
mod approx;
mod factor;

pub use adele::{idele_norm_product, principal_adele, principal_idele, Adele, Idele, Tail};
pub use approx::PAdicApprox;
pub use factor::{is_prime, prime_factors};

use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// A rational prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// Caller guarantees primality (used for constants and factorization output).
    pub(crate) const fn new_unchecked(p: u64) -> Self {
        Prime(p)
    }

    #[inline]
    pub const fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    pub fn to_rational(self) -> Rational {
        Rational::from_integer(self.to_bigint())
    }

    /// `p^e` as an exact rational, for any integer `e`.
    pub fn rpow(self, e: i64) -> Rational {
        rpow(&self.to_rational(), e)
    }

    pub fn fpow(self, e: i64) -> f64 {
        libm::pow(self.0 as f64, e as f64)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// p-adic valuation; zero has the distinguished valuation `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// Whether the valuation is at least `k` (always true for `Infinite`).
    pub fn at_least(self, k: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= k,
            Valuation::Infinite => true,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => v.fmt(f),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer.
pub(crate) fn int_valuation(n: &BigInt, p: Prime) -> i64 {
    debug_assert!(!n.is_zero());
    let pb = p.to_bigint();
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn valuation(r: &Rational, p: Prime) -> Valuation {
    if r.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(int_valuation(r.numer(), p) - int_valuation(r.denom(), p))
}

/// `|r|_p = p^{-v_p(r)}`, exactly; `0` for `r = 0`.
pub fn padic_norm(r: &Rational, p: Prime) -> Rational {
    match valuation(r, p) {
        Valuation::Infinite => Rational::zero(),
        Valuation::Finite(v) => p.rpow(-v),
    }
}

/// `|r|_∞`.
pub fn real_norm(r: &Rational) -> Rational {
    r.abs()
}

/// The fractional part `{r}_p`: the unique `q = m/p^k` in `[0, 1)` such that
/// `r - q` is p-integral.
pub fn frac_part(r: &Rational, p: Prime) -> Rational {
    if r.is_zero() {
        return Rational::zero();
    }
    let k = int_valuation(r.denom(), p);
    if k <= 0 {
        return Rational::zero();
    }
    let pk = num_traits::pow(p.to_bigint(), k as usize);
    let rest = r.denom() / &pk;
    let inv = mod_inverse(&rest, &pk).expect("cofactor is coprime to p");
    let m = (r.numer() * inv).mod_floor(&pk);
    Rational::new(m, pk)
}

/// Canonical expansion `r = p^ν (x_0 + x_1 p + ...)`: returns `ν` and the
/// first `count` digits, `x_0 ≠ 0`.
pub fn digits(r: &Rational, p: Prime, count: usize) -> Result<(i64, Vec<u64>)> {
    let nu = valuation(r, p).finite().ok_or(Error::Zero("canonical expansion"))?;
    if count == 0 {
        return Err(Error::InvalidArgument("digit count must be at least 1".into()));
    }
    let pr = p.to_rational();
    let mut unit = r * p.rpow(-nu);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let d = residue_mod(&unit, &p.to_bigint(), p);
        let d_u = d.to_u64().expect("digit below p");
        out.push(d_u);
        unit = (unit - Rational::from_integer(d)) / &pr;
    }
    Ok((nu, out))
}

/// Residue of a p-integral rational modulo the integer `m` (a power of `p`).
pub(crate) fn residue_mod(r: &Rational, m: &BigInt, p: Prime) -> BigInt {
    debug_assert!(valuation(r, p).at_least(0));
    let inv = mod_inverse(r.denom(), m).expect("denominator coprime to modulus");
    (r.numer() * inv).mod_floor(m)
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// `base^e` for any integer exponent; `base` must be nonzero when `e < 0`.
pub fn rpow(base: &Rational, e: i64) -> Rational {
    let mag = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        mag.recip()
    } else {
        mag
    }
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(r: &Rational) -> f64 {
    match r.to_f64() {
        Some(x) => x,
        None => {
            // Huge numerator/denominator: scale through the logarithms.
            let sign = if r.is_negative() { -1.0 } else { 1.0 };
            let ln = ln_abs_bigint(r.numer()) - ln_abs_bigint(r.denom());
            sign * libm::exp(ln)
        }
    }
}

fn ln_abs_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return libm::log(n.abs().to_f64().unwrap_or(f64::MAX));
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().unwrap_or(1.0);
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

/// Exact rational value of a finite `f64`.
pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::InvalidArgument(alloc::format!("non-finite real {x}")))
}

/// Parses `"num/den"`, `"-9/8"`, `"12"`; also accepts a finite decimal such
/// as `"0.25"`, converted exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let err = || Error::Parse(t.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        let whole = if ip_abs.is_empty() { BigInt::zero() } else { BigInt::from_str(ip_abs).map_err(|_| err())? };
        let frac = BigInt::from_str(fp).map_err(|_| err())?;
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let mag = Rational::new(whole * &scale + frac, scale);
        return Ok(if neg { -mag } else { mag });
    }
    BigInt::from_str(t).map(Rational::from_integer).map_err(|_| err())
}

/// Formats a rational as `num/den`, or `num` for integers.
pub fn format_rational(r: &Rational) -> alloc::string::String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

/// Primes dividing the numerator or the denominator of `r`.
pub fn support(r: &Rational) -> Result<Vec<Prime>> {
    let mut ps = prime_factors(r.numer())?;
    ps.extend(prime_factors(r.denom())?);
    ps.sort();
    ps.dedup();
    Ok(ps)
}

/// Primes dividing the denominator of `r`.
pub fn denominator_primes(r: &Rational) -> Result<Vec<Prime>> {
    prime_factors(r.denom())
}
