use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Composite Gauss-Legendre quadrature on `[-radius, radius]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    /// Truncation radius of the real line.
    pub radius: f64,
    /// Number of panels.
    pub panels: usize,
    /// Nodes per panel.
    pub order: usize,
    /// Largest acceptable error estimate.
    pub budget: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig::for_radius(8.0)
    }
}

impl QuadratureConfig {
    /// Panels of width about 1/8, enough for Gaussian-damped integrands with
    /// moderate oscillation.
    pub fn for_radius(radius: f64) -> Self {
        QuadratureConfig { radius, panels: libm::ceil(16.0 * radius) as usize, order: 20, budget: 1e-12 }
    }
}

/// A quadrature value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error_estimate: f64,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `∫_a^b f` over `panels` equal panels.
pub fn integrate_interval(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, panels: usize, rule: &(Vec<f64>, Vec<f64>)) -> Complex64 {
    let h = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..panels {
        let mid = a + (i as f64 + 0.5) * h;
        let mut s = Complex64::new(0.0, 0.0);
        for (x, w) in rule.0.iter().zip(&rule.1) {
            s += f(mid + 0.5 * h * x) * *w;
        }
        total += s * (0.5 * h);
    }
    total
}

/// `∫_{-R}^{R} f`, with the difference against a rule of twice the panel
/// count as error estimate.
pub fn integrate_real(f: &dyn Fn(f64) -> Complex64, cfg: &QuadratureConfig) -> Result<Quadrature> {
    let rule = gauss_legendre(cfg.order);
    let coarse = integrate_interval(f, -cfg.radius, cfg.radius, cfg.panels, &rule);
    let fine = integrate_interval(f, -cfg.radius, cfg.radius, 2 * cfg.panels, &rule);
    let estimate = (fine - coarse).norm();
    if !(estimate <= cfg.budget) {
        return Err(Error::QuadratureBudget { estimate, budget: cfg.budget });
    }
    Ok(Quadrature { value: fine, error_estimate: estimate })
}

/// `∫_R χ_∞(a x² + b x) dx = ∫ e^{-2πi(ax² + bx)} dx`, defined as the limit
/// of the Gaussian-damped integrals `∫ e^{-εx²} ...` as `ε → 0`.
///
/// After `x = y/√|a|` the damped integrals are computed by quadrature for
/// `ε = 2^{-k}` and extrapolated to `ε = 0` with a Richardson table, which
/// is valid because the damped integral is analytic in `ε`. The damping is
/// centered at the stationary point `y_0 = -β/2 sign(a)` of the phase; the
/// limit does not depend on the center, but off-center damping makes the
/// `ε`-derivatives grow like `(β²/4)^n` and spoils the extrapolation.
pub fn fresnel(a: f64, b: f64, budget: f64) -> Result<Quadrature> {
    if a == 0.0 {
        return Err(Error::Zero("Fresnel integral with a = 0"));
    }
    let s = a.signum();
    let beta = b / libm::sqrt(a.abs());
    let y0 = -0.5 * s * beta;
    let rule = gauss_legendre(24);
    let levels = 8;
    let mut table: Vec<Vec<Complex64>> = Vec::with_capacity(levels);
    for k in 0..levels {
        let eps = libm::ldexp(1.0, -(k as i32));
        // e^{-εy²} < 1e-17 beyond this radius.
        let radius = libm::sqrt(40.0 / eps);
        // the phase derivative is 4π|y - y_0|
        let freq = 2.0 * PI * 2.0 * radius;
        let panels = (libm::ceil(2.0 * radius * freq / 8.0) as usize).max(64);
        let g = |u: f64| {
            let y = y0 + u;
            let ph = -2.0 * PI * (s * y * y + beta * y);
            Complex64::new(0.0, ph).exp() * libm::exp(-eps * u * u)
        };
        let v = integrate_interval(&g, -radius, radius, panels, &rule);
        let mut row = Vec::with_capacity(k + 1);
        row.push(v);
        for j in 1..=k {
            let f = libm::ldexp(1.0, j as i32);
            let r = (row[j - 1] * f - table[k - 1][j - 1]) / (f - 1.0);
            row.push(r);
        }
        table.push(row);
    }
    let last = table[levels - 1][levels - 1];
    let prev = table[levels - 2][levels - 2];
    let estimate = (last - prev).norm() / libm::sqrt(a.abs());
    if !(estimate <= budget) {
        return Err(Error::QuadratureBudget { estimate, budget });
    }
    Ok(Quadrature { value: last / libm::sqrt(a.abs()), error_estimate: estimate })
}
