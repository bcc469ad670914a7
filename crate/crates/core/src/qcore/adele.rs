use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::{denominator_primes, padic_norm, support, to_f64, valuation, Prime, Rational, Valuation};
use crate::error::{Error, Result};

/// What is known about the components at primes without an explicit entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    /// Only the restricted-product guarantee: `|a_p|_p ≤ 1` (adeles) or
    /// `|a_p|_p = 1` (ideles).
    Guaranteed,
    /// Every omitted component equals this rational (diagonal embedding).
    Diagonal(Rational),
}

/// A point of the restricted product `Q_∞ × ∏' Q_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adele {
    real: Rational,
    exceptional: BTreeMap<Prime, Rational>,
    tail: Tail,
}

impl Adele {
    /// Builds and canonicalizes an adele. A diagonal tail must itself be
    /// integral at every prime it covers.
    pub fn new(real: Rational, exceptional: BTreeMap<Prime, Rational>, tail: Tail) -> Result<Self> {
        if let Tail::Diagonal(r) = &tail {
            for q in denominator_primes(r)? {
                if !exceptional.contains_key(&q) {
                    return Err(Error::InvalidArgument(alloc::format!(
                        "diagonal tail is not integral at {q}"
                    )));
                }
            }
        }
        Ok(Adele { real, exceptional, tail }.canonical())
    }

    /// Real part and explicit components, with only the integral-tail guarantee.
    pub fn from_components(real: Rational, exceptional: impl IntoIterator<Item = (Prime, Rational)>) -> Self {
        Adele { real, exceptional: exceptional.into_iter().collect(), tail: Tail::Guaranteed }.canonical()
    }

    pub fn zero() -> Self {
        principal_adele(&Rational::zero())
    }

    fn canonical(mut self) -> Self {
        match &self.tail {
            Tail::Guaranteed => self.exceptional.retain(|&p, a| padic_norm(a, p) > Rational::one()),
            Tail::Diagonal(d) => {
                let d = d.clone();
                self.exceptional.retain(|&p, a| *a != d || padic_norm(&d, p) > Rational::one());
            }
        }
        self
    }

    pub fn real(&self) -> &Rational {
        &self.real
    }

    pub fn exceptional(&self) -> &BTreeMap<Prime, Rational> {
        &self.exceptional
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// Component at `p`, if it is known exactly.
    pub fn component(&self, p: Prime) -> Option<Rational> {
        match (self.exceptional.get(&p), &self.tail) {
            (Some(a), _) => Some(a.clone()),
            (None, Tail::Diagonal(d)) => Some(d.clone()),
            (None, Tail::Guaranteed) => None,
        }
    }

    /// `|a_p|_p`, known even for unspecified tail components (`≤ 1`, reported
    /// as `None` when the exact norm is not determined).
    pub fn norm_at(&self, p: Prime) -> Option<Rational> {
        self.component(p).map(|a| padic_norm(&a, p))
    }

    /// Primes where the component is explicit (after canonicalization these
    /// are exactly the primes with `|a_p|_p > 1`, or where a diagonal tail
    /// is overridden).
    pub fn primes(&self) -> impl Iterator<Item = Prime> + '_ {
        self.exceptional.keys().copied()
    }

    /// True when the component at `p` lies in `Z_p`.
    pub fn integral_at(&self, p: Prime) -> bool {
        match self.component(p) {
            Some(a) => valuation(&a, p).at_least(0),
            None => true,
        }
    }
}

/// Diagonal image of `r`: explicit components exactly at the primes dividing
/// the denominator.
pub fn principal_adele(r: &Rational) -> Adele {
    let ex = denominator_primes(r)
        .expect("denominators of principal adeles are factorable")
        .into_iter()
        .map(|p| (p, r.clone()))
        .collect();
    Adele { real: r.clone(), exceptional: ex, tail: Tail::Diagonal(r.clone()) }
}

/// A point of the idele group: invertible real part, nonzero components, unit tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Idele {
    real: Rational,
    exceptional: BTreeMap<Prime, Rational>,
    tail: Tail,
}

impl Idele {
    pub fn new(real: Rational, exceptional: BTreeMap<Prime, Rational>, tail: Tail) -> Result<Self> {
        if real.is_zero() || exceptional.values().any(Zero::is_zero) {
            return Err(Error::Zero("inverse in the idele group"));
        }
        if let Tail::Diagonal(d) = &tail {
            if d.is_zero() {
                return Err(Error::Zero("inverse in the idele group"));
            }
            for q in support(d)? {
                if !exceptional.contains_key(&q) {
                    return Err(Error::InvalidArgument(alloc::format!("diagonal tail is not a unit at {q}")));
                }
            }
        }
        Ok(Idele { real, exceptional, tail }.canonical())
    }

    pub fn from_components(real: Rational, exceptional: impl IntoIterator<Item = (Prime, Rational)>) -> Result<Self> {
        Idele::new(real, exceptional.into_iter().collect(), Tail::Guaranteed)
    }

    fn canonical(mut self) -> Self {
        match &self.tail {
            Tail::Guaranteed => self.exceptional.retain(|&p, a| padic_norm(a, p) != Rational::one()),
            Tail::Diagonal(d) => {
                let d = d.clone();
                self.exceptional.retain(|&p, a| *a != d || padic_norm(&d, p) != Rational::one());
            }
        }
        self
    }

    pub fn real(&self) -> &Rational {
        &self.real
    }

    pub fn exceptional(&self) -> &BTreeMap<Prime, Rational> {
        &self.exceptional
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn component(&self, p: Prime) -> Option<Rational> {
        match (self.exceptional.get(&p), &self.tail) {
            (Some(a), _) => Some(a.clone()),
            (None, Tail::Diagonal(d)) => Some(d.clone()),
            (None, Tail::Guaranteed) => None,
        }
    }

    /// `|λ_p|_p`; tail components are units.
    pub fn norm_at(&self, p: Prime) -> Rational {
        self.exceptional.get(&p).map_or_else(Rational::one, |a| padic_norm(a, p))
    }

    pub fn primes(&self) -> impl Iterator<Item = Prime> + '_ {
        self.exceptional.keys().copied()
    }

    pub fn as_adele(&self) -> Adele {
        Adele { real: self.real.clone(), exceptional: self.exceptional.clone(), tail: self.tail.clone() }.canonical()
    }

    /// Componentwise product. Fails where a component of one factor is an
    /// unspecified unit while the other is explicit, since the product value
    /// is then unknown.
    pub fn mul(&self, other: &Idele) -> Result<Idele> {
        let mut primes: Vec<Prime> = self.primes().chain(other.primes()).collect();
        primes.sort();
        primes.dedup();
        let mut ex = BTreeMap::new();
        for p in primes {
            let a = self.component(p).ok_or(Error::MissingComponent(p.get()))?;
            let b = other.component(p).ok_or(Error::MissingComponent(p.get()))?;
            ex.insert(p, a * b);
        }
        let tail = match (&self.tail, &other.tail) {
            (Tail::Diagonal(a), Tail::Diagonal(b)) => Tail::Diagonal(a * b),
            _ => Tail::Guaranteed,
        };
        Idele::new(&self.real * &other.real, ex, tail)
    }

    pub fn inverse(&self) -> Idele {
        let ex = self.exceptional.iter().map(|(&p, a)| (p, a.recip())).collect();
        let tail = match &self.tail {
            Tail::Diagonal(d) => Tail::Diagonal(d.recip()),
            Tail::Guaranteed => Tail::Guaranteed,
        };
        Idele { real: self.real.recip(), exceptional: ex, tail }
    }
}

/// Diagonal image of `r ≠ 0`: explicit components at every prime of the
/// numerator and denominator.
pub fn principal_idele(r: &Rational) -> Result<Idele> {
    if r.is_zero() {
        return Err(Error::Zero("inverse in the idele group"));
    }
    let ex = support(r)?.into_iter().map(|p| (p, r.clone())).collect();
    Ok(Idele { real: r.clone(), exceptional: ex, tail: Tail::Diagonal(r.clone()) })
}

/// `|r|_∞^α ∏_{p | num·den} |r|_p^α`. For `α = 1` the product is formed in
/// exact arithmetic before conversion.
pub fn idele_norm_product(r: &Rational, alpha: Complex64) -> Result<Complex64> {
    if r.is_zero() {
        return Err(Error::Zero("idele norm"));
    }
    let ps = support(r)?;
    if alpha == Complex64::new(1.0, 0.0) {
        let mut acc = r.abs();
        for p in &ps {
            acc *= padic_norm(r, *p);
        }
        return Ok(Complex64::new(to_f64(&acc), 0.0));
    }
    // Sum logarithms exactly in the exponent of each prime, then exponentiate once.
    let mut log_norm = libm::log(to_f64(&r.abs()));
    for p in &ps {
        if let Valuation::Finite(v) = valuation(r, *p) {
            log_norm -= v as f64 * libm::log(p.get() as f64);
        }
    }
    Ok((alpha * log_norm).exp())
}
