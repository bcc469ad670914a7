use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;

use crate::characters::chi_inf;
use crate::error::{Error, Result};
use crate::integrate::{integrate_real, QuadratureConfig};

type Profile = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A sampled real profile with a declared radius outside which it is
/// negligible. Transforms of such profiles are computed by quadrature.
#[derive(Clone)]
pub struct GenericProfile {
    pub label: String,
    pub decay_radius: Option<f64>,
    f: Profile,
}

impl GenericProfile {
    pub fn new(label: impl Into<String>, decay_radius: Option<f64>, f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        GenericProfile { label: label.into(), decay_radius, f: Arc::new(f) }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        (self.f)(x)
    }
}

impl fmt::Debug for GenericProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GenericProfile").field("label", &self.label).field("decay_radius", &self.decay_radius).finish()
    }
}

/// A Schwartz function on `R`: either a finite combination
/// `Σ c_n e^{-πx²} H_n(x√(2π))` or a generic profile.
#[derive(Debug, Clone)]
pub enum RealTestFunction {
    Hermite(Vec<(Complex64, u32)>),
    Generic(GenericProfile),
}

impl RealTestFunction {
    /// `e^{-πx²}`.
    pub fn gaussian() -> Self {
        RealTestFunction::Hermite(vec![(Complex64::new(1.0, 0.0), 0)])
    }

    pub fn hermite(n: u32, coeff: Complex64) -> Self {
        RealTestFunction::Hermite(vec![(coeff, n)])
    }

    pub fn evaluate(&self, x: f64) -> Complex64 {
        match self {
            RealTestFunction::Hermite(cs) => cs.iter().map(|&(c, n)| c * hermite_function(n, x)).sum(),
            RealTestFunction::Generic(g) => g.eval(x),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        match self {
            RealTestFunction::Hermite(cs) => RealTestFunction::Hermite(cs.iter().map(|&(c, n)| (c * s, n)).collect()),
            RealTestFunction::Generic(g) => {
                let g = g.clone();
                RealTestFunction::Generic(GenericProfile::new(g.label.clone(), g.decay_radius, move |x| s * g.eval(x)))
            }
        }
    }

    /// Radius beyond which the function is below double precision.
    pub fn decay_radius(&self) -> Option<f64> {
        match self {
            RealTestFunction::Hermite(cs) => {
                let n = cs.iter().map(|&(_, n)| n).max().unwrap_or(0) as f64;
                // e^{-πx²} x^n < 1e-20 well before this radius for n ≤ 16.
                Some(4.5 + 0.35 * n)
            }
            RealTestFunction::Generic(g) => g.decay_radius,
        }
    }

    /// `φ̃(ξ) = ∫ φ(x) e^{-2πiξx} dx`. Hermite functions are eigenvectors with
    /// eigenvalue `(-i)^n`; generic profiles are transformed by quadrature.
    pub fn fourier(&self) -> Result<Self> {
        match self {
            RealTestFunction::Hermite(cs) => {
                Ok(RealTestFunction::Hermite(cs.iter().map(|&(c, n)| (c * minus_i_pow(n), n)).collect()))
            }
            RealTestFunction::Generic(g) => {
                let radius = g.decay_radius.ok_or_else(|| {
                    Error::InvalidArgument(alloc::format!("profile '{}' has no decay bound", g.label))
                })?;
                let cfg = QuadratureConfig::for_radius(radius);
                let g = g.clone();
                let label = alloc::format!("F[{}]", g.label);
                Ok(RealTestFunction::Generic(GenericProfile::new(label, Some(radius), move |xi| {
                    integrate_real(&|x| g.eval(x) * chi_inf(xi * x), &cfg)
                        .map(|r| r.value)
                        .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
                })))
            }
        }
    }
}

/// `(-i)^n`.
pub fn minus_i_pow(n: u32) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Physicists' Hermite polynomial `H_n(y)` by the three-term recurrence.
pub fn hermite_poly(n: u32, y: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * y);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = 2.0 * y * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Monomial coefficients of `H_n`, lowest degree first.
pub fn hermite_coeffs(n: u32) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 2.0];
    for k in 1..n as usize {
        let mut next = vec![0.0; k + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= 2.0 * k as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `e^{-πx²} H_n(x√(2π))`.
pub fn hermite_function(n: u32, x: f64) -> f64 {
    libm::exp(-PI * x * x) * hermite_poly(n, x * libm::sqrt(2.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_recurrence_matches_coefficients() {
        for n in 0..10 {
            let cs = hermite_coeffs(n);
            for y in [-1.3, 0.0, 0.4, 2.2] {
                let direct: f64 = cs.iter().enumerate().map(|(k, c)| c * libm::pow(y, k as f64)).sum();
                assert!((direct - hermite_poly(n, y)).abs() < 1e-9 * (1.0 + direct.abs()));
            }
        }
        assert_eq!(hermite_coeffs(2), vec![-2.0, 0.0, 4.0]);
    }

    #[test]
    fn hermite_multiplier_by_quadrature() {
        let cfg = QuadratureConfig::default();
        for n in 0..6 {
            for xi in [0.0, 0.3, 1.1] {
                let q = integrate_real(&|x| Complex64::new(hermite_function(n, x), 0.0) * chi_inf(xi * x), &cfg).unwrap();
                let want = minus_i_pow(n) * hermite_function(n, xi);
                assert!((q.value - want).norm() < 1e-11, "n = {n}, ξ = {xi}");
            }
        }
    }

    #[test]
    fn generic_transform_needs_decay() {
        let g = GenericProfile::new("g", None, |x| Complex64::new(libm::exp(-PI * x * x), 0.0));
        assert!(RealTestFunction::Generic(g).fourier().is_err());
        let g = GenericProfile::new("g", Some(6.0), |x| Complex64::new(libm::exp(-PI * x * x), 0.0));
        let ft = RealTestFunction::Generic(g).fourier().unwrap();
        assert!((ft.evaluate(0.5) - Complex64::new(libm::exp(-PI * 0.25), 0.0)).norm() < 1e-12);
    }
}
