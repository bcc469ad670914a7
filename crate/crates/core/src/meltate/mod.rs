//! Mellin transforms of Schwartz-Bruhat functions and the Tate formula
//! `Φ(α) = Φ̃(1 - α)`.

mod local;
mod special;

pub use local::{mellin_local, mellin_local_by_spheres, LocalMellinFactor};
pub use special::{eta, euler_product, gamma, zeta};

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::bruhat::{hermite_coeffs, ElementaryFunction, RealTestFunction};
use crate::error::{Error, Result};
use crate::integrate::{gauss_legendre, integrate_interval};
use crate::qcore::Prime;

fn check_alpha(alpha: Complex64) -> Result<()> {
    if alpha == Complex64::new(1.0, 0.0) || alpha == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole(alloc::format!("Φ has a simple pole at α = {}", alpha.re)));
    }
    if !(alpha.re > 0.0) {
        return Err(Error::Domain(alloc::format!("α = {alpha}"), "needs Re α > 0"));
    }
    Ok(())
}

/// `∫_R |x|^{α-1} φ(x) dx`.
///
/// For `e^{-πx²} H_n(x√(2π))` the even monomials `h_k y^k` of `H_n` give
/// `h_k 2^{k/2} π^{-α/2} Γ((α+k)/2)`; odd ones integrate to zero. Generic
/// profiles are integrated in the variable `x = e^s`.
pub fn mellin_real(f: &RealTestFunction, alpha: Complex64) -> Result<Complex64> {
    if !(alpha.re > 0.0) {
        return Err(Error::Domain(alloc::format!("α = {alpha}"), "needs Re α > 0"));
    }
    match f {
        RealTestFunction::Hermite(cs) => {
            let pi_pow = Complex64::new(PI, 0.0).powc(-alpha / 2.0);
            let mut acc = Complex64::new(0.0, 0.0);
            for &(c, n) in cs {
                for (k, h) in hermite_coeffs(n).into_iter().enumerate().step_by(2) {
                    if h != 0.0 {
                        acc += c * h * libm::pow(2.0, k as f64 / 2.0) * gamma((alpha + k as f64) / 2.0)?;
                    }
                }
            }
            Ok(acc * pi_pow)
        }
        RealTestFunction::Generic(g) => {
            let radius = g.decay_radius.ok_or_else(|| {
                Error::InvalidArgument(alloc::format!("profile '{}' has no decay bound", g.label))
            })?;
            // e^{s Re α} falls below 1e-16 at the lower end.
            let s_low = libm::log(1e-16) / alpha.re;
            let s_high = libm::log(radius);
            let panels = (((s_high - s_low) * 8.0) as usize).max(64);
            let rule = gauss_legendre(20);
            let h = |s: f64| {
                let x = libm::exp(s);
                (Complex64::new(0.0, 0.0) + alpha * s).exp() * (g.eval(x) + g.eval(-x))
            };
            Ok(integrate_interval(&h, s_low, s_high, panels, &rule))
        }
    }
}

/// `Φ(α)` with its factors.
#[derive(Debug, Clone, PartialEq)]
pub struct MellinResult {
    pub value: Complex64,
    /// `∫_R |x|^{α-1} φ_∞(x) dx`: closed form for Hermite data, which
    /// continues to `Re α > 0` through `Γ`.
    pub real: Complex64,
    /// `N_p(α)` for the explicit primes; exact Laurent polynomials in `p^{-α}`,
    /// valid for every `α`.
    pub locals: Vec<(Prime, Complex64)>,
    /// `ζ(α)`, from the eta series, valid for `Re α > 0`, `α ≠ 1`.
    pub zeta: Complex64,
}

/// `Φ(α) = ∫|x_∞|^{α-1} φ_∞ · ∏_{p∈P} N_p(α) · ζ(α)`; the `Ω` factors at
/// `p ∉ P` are absorbed into `ζ`.
pub fn phi_p(f: &ElementaryFunction, alpha: Complex64) -> Result<MellinResult> {
    check_alpha(alpha)?;
    let real = mellin_real(f.real(), alpha)?;
    let locals: Vec<(Prime, Complex64)> = f.locals().iter().map(|(&p, g)| (p, mellin_local(g).eval(alpha))).collect();
    let z = zeta(alpha)?;
    let value = locals.iter().fold(real * z, |acc, (_, n)| acc * n);
    Ok(MellinResult { value, real, locals, zeta: z })
}

/// `|Φ(α) - Φ̃(1 - α)|`, where `Φ̃` is formed from the Fourier transform.
pub fn tate_check(f: &ElementaryFunction, alpha: Complex64) -> Result<f64> {
    if !(alpha.re > 0.0 && alpha.re < 1.0) {
        return Err(Error::Domain(alloc::format!("α = {alpha}"), "Tate check needs 0 < Re α < 1"));
    }
    let lhs = phi_p(f, alpha)?.value;
    let rhs = phi_p(&f.fourier()?, Complex64::new(1.0, 0.0) - alpha)?.value;
    Ok((lhs - rhs).norm())
}

/// `ξ(α) = π^{-α/2} Γ(α/2) ζ(α)`.
pub fn completed_zeta(alpha: Complex64) -> Result<Complex64> {
    Ok(Complex64::new(PI, 0.0).powc(-alpha / 2.0) * gamma(alpha / 2.0)? * zeta(alpha)?)
}

/// `|ξ(α) - ξ(1 - α)|` with both sides evaluated independently.
pub fn functional_equation_residual(alpha: Complex64) -> Result<f64> {
    if !(alpha.re > 0.0 && alpha.re < 1.0) {
        return Err(Error::Domain(alloc::format!("α = {alpha}"), "needs 0 < Re α < 1"));
    }
    Ok((completed_zeta(alpha)? - completed_zeta(Complex64::new(1.0, 0.0) - alpha)?).norm())
}

/// `Φ_{ψ_0}(α) / ξ(α)`: the constant in front of the completed zeta for
/// the vacuum state.
pub fn vacuum_constant(alpha: Complex64) -> Result<Complex64> {
    Ok(phi_p(&crate::bruhat::vacuum(), alpha)?.value / completed_zeta(alpha)?)
}
