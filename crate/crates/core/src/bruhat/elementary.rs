use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::padic::{omega, PAdicTestFunction};
use super::real::RealTestFunction;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::qcore::{to_f64, Adele, Prime};

/// `φ_∞(x_∞) ∏_{p∈P} φ_p(x_p) ∏_{p∉P} Ω_p(|x_p|_p)`.
#[derive(Debug, Clone)]
pub struct ElementaryFunction {
    real: RealTestFunction,
    locals: BTreeMap<Prime, PAdicTestFunction>,
}

impl ElementaryFunction {
    /// A real factor with `Ω` at every prime.
    pub fn new(real: RealTestFunction) -> Self {
        ElementaryFunction { real, locals: BTreeMap::new() }
    }

    pub fn with_local(mut self, f: PAdicTestFunction) -> Self {
        self.locals.insert(f.prime(), f);
        self
    }

    pub fn real(&self) -> &RealTestFunction {
        &self.real
    }

    pub fn locals(&self) -> &BTreeMap<Prime, PAdicTestFunction> {
        &self.locals
    }

    /// The set `P` of primes with an explicit factor.
    pub fn primes(&self) -> impl Iterator<Item = Prime> + '_ {
        self.locals.keys().copied()
    }

    /// The factor at `p`, which is `Ω_p` outside `P`.
    pub fn local(&self, p: Prime) -> PAdicTestFunction {
        self.locals.get(&p).cloned().unwrap_or_else(|| PAdicTestFunction::omega(p))
    }

    /// Real value and exact p-adic product at an adele.
    pub fn evaluate_parts(&self, x: &Adele) -> Result<(Complex64, Cyclotomic)> {
        let mut padic = Cyclotomic::one();
        for (&p, f) in &self.locals {
            let xp = x.component(p).ok_or(Error::MissingComponent(p.get()))?;
            padic = &padic * &f.evaluate(&xp);
        }
        for p in x.primes().filter(|p| !self.locals.contains_key(p)) {
            if omega(&x.norm_at(p).expect("explicit component"))? == 0 {
                padic = Cyclotomic::zero();
            }
        }
        Ok((self.real.evaluate(to_f64(x.real())), padic))
    }

    pub fn evaluate(&self, x: &Adele) -> Result<Complex64> {
        let (r, p) = self.evaluate_parts(x)?;
        Ok(r * p.to_complex())
    }

    /// Componentwise transform; `Ω` tails stay `Ω`.
    pub fn fourier(&self) -> Result<Self> {
        Ok(ElementaryFunction {
            real: self.real.fourier()?,
            locals: self.locals.iter().map(|(&p, f)| (p, f.fourier())).collect(),
        })
    }

    pub fn scale_real(&self, c: Complex64) -> Self {
        ElementaryFunction { real: self.real.scale(c), locals: self.locals.clone() }
    }
}

/// `ψ_0 = 2^{1/4} e^{-πx_∞²} ∏_p Ω_p`.
pub fn vacuum() -> ElementaryFunction {
    ElementaryFunction::new(RealTestFunction::hermite(0, Complex64::new(libm::pow(2.0, 0.25), 0.0)))
}

/// Real factor `2^{1/4} (2^n n!)^{-1/2} e^{-πx²} H_n(x√(2π))` with `Ω` tails.
pub fn oscillator_state(n: u32) -> ElementaryFunction {
    ElementaryFunction::new(RealTestFunction::hermite(n, Complex64::new(state_norm(n), 0.0)))
}

pub(crate) fn state_norm(n: u32) -> f64 {
    let fact: f64 = (1..=n).map(f64::from).product();
    libm::pow(2.0, 0.25) / libm::sqrt(libm::pow(2.0, n as f64) * fact)
}

/// A finite combination `Σ C_i φ_i` of elementary functions.
#[derive(Debug, Clone, Default)]
pub struct SchwartzBruhat {
    terms: Vec<(Complex64, ElementaryFunction)>,
}

impl SchwartzBruhat {
    pub fn new() -> Self {
        SchwartzBruhat::default()
    }

    pub fn single(f: ElementaryFunction) -> Self {
        SchwartzBruhat { terms: alloc::vec![(Complex64::new(1.0, 0.0), f)] }
    }

    pub fn with(mut self, c: Complex64, f: ElementaryFunction) -> Self {
        self.terms.push((c, f));
        self
    }

    pub fn terms(&self) -> &[(Complex64, ElementaryFunction)] {
        &self.terms
    }

    pub fn scale(&self, c: Complex64) -> Self {
        SchwartzBruhat { terms: self.terms.iter().map(|(a, f)| (a * c, f.clone())).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        SchwartzBruhat { terms }
    }

    pub fn evaluate(&self, x: &Adele) -> Result<Complex64> {
        self.terms.iter().try_fold(Complex64::new(0.0, 0.0), |acc, (c, f)| Ok(acc + c * f.evaluate(x)?))
    }

    pub fn fourier(&self) -> Result<Self> {
        let terms = self.terms.iter().map(|(c, f)| Ok((*c, f.fourier()?))).collect::<Result<_>>()?;
        Ok(SchwartzBruhat { terms })
    }
}

impl From<ElementaryFunction> for SchwartzBruhat {
    fn from(f: ElementaryFunction) -> Self {
        SchwartzBruhat::single(f)
    }
}
