//! Adelic distributions as pairing rules against Schwartz-Bruhat functions.
//!
//! A pairing with an elementary function `φ = φ_∞ ∏_{p∈P} φ_p ∏_{p∉P} Ω_p`
//! is a product of local pairings. Each distribution carries a certificate
//! describing its local pairings against `Ω_p` outside a finite set, so the
//! infinite product reduces to finitely many computed factors.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;

use crate::bruhat::{omega, ElementaryFunction, PAdicTestFunction, RealTestFunction, SchwartzBruhat};
use crate::characters::chi_inf;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::integrate::{integrate_ball_character, integrate_qp, integrate_real, Integrand, QuadratureConfig, SphereDecompositionPlan};
use crate::bruhat::Ball;
use crate::meltate::phi_p;
use crate::qcore::{to_f64, Adele, Idele, Prime, Rational};

/// How the local pairings with `Ω_p` behave at primes without an explicit
/// factor.
#[derive(Debug, Clone, PartialEq)]
pub enum TailCertificate {
    /// `(f_p, Ω_p) = 1` for every prime outside the set.
    TrivialOutside(BTreeSet<Prime>),
    /// `∏_p (f_p, Ω_p) = ∏_p (1 - p^{-α})^{-1} = ζ(α)`, absolutely
    /// convergent for `Re α > 1` and continued beyond it.
    Zeta(Complex64),
}

#[derive(Debug, Clone)]
pub enum AdelicDistribution {
    /// `φ ↦ φ(x_0)`.
    Delta(Adele),
    /// `φ ↦ ∫ χ(x) φ(x) dx = φ̃(1)`.
    Chi,
    /// `φ ↦ ∫ χ(a x² + b x) φ(x) dx`.
    ChiQuadratic { a: Idele, b: Adele },
    /// `φ ↦ ∫ |x|^{α-1} φ(x) dx`, normalized into `Φ(α)`.
    PiAlpha(Complex64),
    /// `φ ↦ ∫ g(x) φ(x) dx`.
    Function(SchwartzBruhat),
}

/// Result of a pairing, with the number of local factors that were
/// actually computed for each elementary term.
#[derive(Debug, Clone, PartialEq)]
pub struct Pairing {
    pub value: Complex64,
    /// Computed p-adic factors per elementary term.
    pub factor_counts: Vec<usize>,
    /// `|P_i| + |E|` per term: the bound on the computed factors.
    pub factor_bounds: Vec<usize>,
}

impl Pairing {
    pub fn within_bounds(&self) -> bool {
        self.factor_counts.iter().zip(&self.factor_bounds).all(|(c, b)| c <= b)
    }
}

pub fn delta() -> AdelicDistribution {
    AdelicDistribution::Delta(Adele::zero())
}

pub fn delta_at(x: Adele) -> AdelicDistribution {
    AdelicDistribution::Delta(x)
}

pub fn chi() -> AdelicDistribution {
    AdelicDistribution::Chi
}

pub fn chi_quadratic(a: Idele, b: Adele) -> AdelicDistribution {
    AdelicDistribution::ChiQuadratic { a, b }
}

pub fn pi_alpha(alpha: Complex64) -> AdelicDistribution {
    AdelicDistribution::PiAlpha(alpha)
}

pub fn from_function(g: SchwartzBruhat) -> AdelicDistribution {
    AdelicDistribution::Function(g)
}

fn real_quadrature(f: &dyn Fn(f64) -> Complex64, radius: f64, oscillation: f64) -> Result<Complex64> {
    let mut cfg = QuadratureConfig::for_radius(radius);
    cfg.panels = cfg.panels.max((4.0 * radius * (1.0 + oscillation)) as usize);
    cfg.budget = 1e-10;
    Ok(integrate_real(f, &cfg)?.value)
}

fn decay(f: &RealTestFunction) -> Result<f64> {
    f.decay_radius().ok_or_else(|| Error::InvalidArgument("real factor has no decay bound".into()))
}

fn component(x: &Adele, p: Prime) -> Result<Rational> {
    x.component(p).ok_or(Error::MissingComponent(p.get()))
}

impl AdelicDistribution {
    /// The finite set `E` outside which `(f_p, Ω_p) = 1`, or the Euler-type
    /// tail description.
    pub fn tail_certificate(&self) -> TailCertificate {
        match self {
            AdelicDistribution::Delta(x) => TailCertificate::TrivialOutside(x.primes().collect()),
            AdelicDistribution::Chi => TailCertificate::TrivialOutside(BTreeSet::new()),
            AdelicDistribution::ChiQuadratic { a, b } => {
                // a_p a unit and b_p integral give ∫_{Z_p} χ_p = 1.
                TailCertificate::TrivialOutside(a.primes().chain(b.primes()).collect())
            }
            AdelicDistribution::PiAlpha(alpha) => TailCertificate::Zeta(*alpha),
            AdelicDistribution::Function(g) => {
                TailCertificate::TrivialOutside(g.terms().iter().flat_map(|(_, e)| e.primes()).collect())
            }
        }
    }

    /// `(f, φ) = Σ_i C_i (f, φ_i)`.
    pub fn pair(&self, phi: &SchwartzBruhat) -> Result<Pairing> {
        let mut out = Pairing { value: Complex64::zero(), factor_counts: Vec::new(), factor_bounds: Vec::new() };
        for (c, e) in phi.terms() {
            let (v, count, bound) = self.pair_elementary(e)?;
            out.value += c * v;
            out.factor_counts.push(count);
            out.factor_bounds.push(bound);
        }
        Ok(out)
    }

    /// Pairing with one elementary function: value, computed p-adic factors,
    /// and the bound `|P| + |E|`.
    fn pair_elementary(&self, phi: &ElementaryFunction) -> Result<(Complex64, usize, usize)> {
        let p_set: BTreeSet<Prime> = phi.primes().collect();
        let e_set = match self.tail_certificate() {
            TailCertificate::TrivialOutside(e) => e,
            TailCertificate::Zeta(alpha) => {
                if !(alpha.re > 0.0) {
                    return Err(Error::TailCertificate(alloc::format!(
                        "∏_p (1 - p^-α)^-1 has no continuation used here for Re α = {} ≤ 0",
                        alpha.re
                    )));
                }
                BTreeSet::new()
            }
        };
        let bound = p_set.len() + e_set.len();
        let places: BTreeSet<Prime> = p_set.union(&e_set).copied().collect();

        if let AdelicDistribution::PiAlpha(alpha) = self {
            let r = phi_p(phi, *alpha)?;
            return Ok((r.value, r.locals.len(), bound));
        }

        let mut exact = Cyclotomic::one();
        let mut count = 0;
        let real = match self {
            AdelicDistribution::Delta(x) => {
                for &p in &places {
                    let xp = component(x, p)?;
                    let v = if p_set.contains(&p) {
                        phi.local(p).evaluate(&xp)
                    } else {
                        Cyclotomic::from_rational(Rational::from_integer(omega(&x.norm_at(p).expect("explicit"))?.into()))
                    };
                    exact = &exact * &v;
                    count += 1;
                }
                phi.real().evaluate(to_f64(x.real()))
            }
            AdelicDistribution::Chi => {
                let one = Rational::from_integer(1.into());
                for &p in &places {
                    exact = &exact * &phi.local(p).fourier().evaluate(&one);
                    count += 1;
                }
                phi.real().fourier()?.evaluate(1.0)
            }
            AdelicDistribution::ChiQuadratic { a, b } => {
                let plan = SphereDecompositionPlan::default();
                for &p in &places {
                    let ap = a.component(p).ok_or(Error::MissingComponent(p.get()))?;
                    let bp = component(b, p)?;
                    let v = if p_set.contains(&p) {
                        let f = phi.local(p);
                        integrate_qp(p, Integrand::Weighted { f: &f, a: &ap, b: &bp }, &plan)?.value
                    } else {
                        integrate_ball_character(&Ball::unit(p), &ap, &bp)?.value
                    };
                    exact = &exact * &v;
                    count += 1;
                }
                let (ar, br) = (to_f64(a.real()), to_f64(b.real()));
                let r = decay(phi.real())?;
                let f = |x: f64| chi_inf(ar * x * x + br * x) * phi.real().evaluate(x);
                real_quadrature(&f, r, 2.0 * ar.abs() * r + br.abs())?
            }
            AdelicDistribution::Function(g) => {
                let mut total = Complex64::zero();
                for (c, ge) in g.terms() {
                    let mut prod = Cyclotomic::one();
                    let mut local_count = 0;
                    for p in ge.primes().chain(phi.primes()).collect::<BTreeSet<_>>() {
                        prod = &prod * &pair_local(&ge.local(p), &phi.local(p));
                        local_count += 1;
                    }
                    count = count.max(local_count);
                    let r = decay(phi.real())?.min(decay(ge.real())?);
                    let real = real_quadrature(&|x| ge.real().evaluate(x) * phi.real().evaluate(x), r, 0.0)?;
                    total += c * real * prod.to_complex();
                }
                return Ok((total, count, bound));
            }
            AdelicDistribution::PiAlpha(_) => unreachable!(),
        };
        Ok((real * exact.to_complex(), count, bound))
    }
}

/// `∫_{Q_p} g φ dx`, exactly.
fn pair_local(g: &PAdicTestFunction, phi: &PAdicTestFunction) -> Cyclotomic {
    g.mul(phi).integral()
}
