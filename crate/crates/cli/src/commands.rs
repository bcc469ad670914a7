//! One function per subcommand. Each returns its reports; numeric failures
//! become reports with `pass = false`, while malformed input is a
//! [`UsageError`].

use adelic_core::bruhat::{vacuum, ElementaryFunction, SchwartzBruhat};
use adelic_core::characters::{chi_p, chi_principal_phase};
use adelic_core::cyclotomic::Cyclotomic;
use adelic_core::distrib::{self, AdelicDistribution};
use adelic_core::gauss::{
    calibrate, gauss_closed_form_inf_exact, gauss_closed_form_inf_rational, gauss_closed_form_p, lambda_product_phase,
    product_formula_check, product_formula_exact,
};
use adelic_core::integrate::{fresnel, integrate_qp, Integrand, QuadratureConfig, SphereDecompositionPlan};
use adelic_core::meltate::{completed_zeta, functional_equation_residual, phi_p, tate_check};
use adelic_core::oscillator::{eigen_check, omega_state, padic_cos, padic_sin};
use adelic_core::qcore::{
    frac_part, int, padic_norm, principal_adele, principal_idele, real_norm, support, to_f64, valuation, PAdicApprox,
    Prime, Rational,
};
use num_complex::Complex64;
use num_traits::One;
use thiserror::Error;

use crate::args::{Command, DistributionName, Global, PlaceArg};
use crate::format::{parse_elementary, parse_function};
use crate::report::{fmt_complex, fmt_cyclotomic, fmt_rational, CheckReport};
use crate::tolerances;

#[derive(Debug, Error, PartialEq)]
#[error("{0}")]
pub struct UsageError(pub String);

/// Settings shared by every command.
#[derive(Debug, Clone)]
pub struct Config {
    pub tolerance: Option<f64>,
    pub precision: i64,
    pub plan: SphereDecompositionPlan,
    pub quadrature: QuadratureConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tolerance: None,
            precision: tolerances::DEFAULT_PRECISION,
            plan: SphereDecompositionPlan::default(),
            quadrature: QuadratureConfig { radius: 10.0, panels: 160, order: 20, budget: 1e-12 },
        }
    }
}

impl Config {
    pub fn from_global(g: &Global) -> Result<Self, UsageError> {
        if g.sphere_range < 1 || g.precision < 1 || g.quad_nodes < 2 || g.quad_radius.is_nan() || g.quad_radius <= 0.0 {
            return Err(UsageError("sphere range, precision and quadrature settings must be positive".into()));
        }
        if g.tolerance.is_some_and(|t| t.is_nan() || t < 0.0) {
            return Err(UsageError("tolerance must be non-negative".into()));
        }
        Ok(Config {
            tolerance: g.tolerance,
            precision: g.precision,
            plan: SphereDecompositionPlan { sphere_low: -g.sphere_range, sphere_high: g.sphere_range, max_cosets: g.max_cosets },
            quadrature: QuadratureConfig {
                radius: g.quad_radius,
                panels: (16.0 * g.quad_radius).ceil() as usize,
                order: g.quad_nodes,
                budget: 1e-12,
            },
        })
    }

    /// The configured override, or the check's own default.
    pub fn tol(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }
}

/// `|x - y|` for exact values: zero exactly when they agree.
pub fn exact_gap(x: &Cyclotomic, y: &Cyclotomic) -> f64 {
    let d = (x - y).reduced();
    if d.is_zero() {
        0.0
    } else {
        d.to_complex().norm().max(f64::MIN_POSITIVE)
    }
}

/// The p-adic size of `d` once it is known modulo `p^n`: zero when
/// `v_p(d) ≥ n`.
pub fn defect_mod(d: &Rational, p: Prime, n: i64) -> f64 {
    match valuation(d, p).finite() {
        Some(v) if v < n => p.fpow(-v),
        _ => 0.0,
    }
}

/// Defects of `sin² t + cos² t = 1` and `sin 2t = 2 sin t cos t` modulo the
/// precision of `t`.
pub fn trig_defects(t: &PAdicApprox) -> adelic_core::Result<(f64, f64)> {
    let p = t.prime();
    let n = t.precision();
    let s = padic_sin(t)?.value;
    let c = padic_cos(t)?.value;
    let s2 = padic_sin(&t.scale(&int(2)))?.value;
    let (s, c, s2) = (s.approximant(), c.approximant(), s2.approximant());
    let pythagoras = s * s + c * c - Rational::one();
    let double = s2 - int(2) * s * c;
    Ok((defect_mod(&pythagoras, p, n), defect_mod(&double, p, n)))
}

fn load_text(arg: &str) -> Result<String, UsageError> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn load_function(arg: Option<&String>) -> Result<(SchwartzBruhat, String), UsageError> {
    match arg {
        None => Ok((SchwartzBruhat::single(vacuum()), "vacuum".into())),
        Some(a) => {
            let text = load_text(a)?;
            let g = parse_function(&text).map_err(|e| UsageError(e.to_string()))?;
            Ok((g, text.split_whitespace().collect::<Vec<_>>().join(" ")))
        }
    }
}

fn load_elementary(arg: Option<&String>) -> Result<(ElementaryFunction, String), UsageError> {
    match arg {
        None => Ok((vacuum(), "vacuum".into())),
        Some(a) => {
            let text = load_text(a)?;
            let f = parse_elementary(&text).map_err(|e| UsageError(e.to_string()))?;
            Ok((f, text.split_whitespace().collect::<Vec<_>>().join(" ")))
        }
    }
}

fn fail_or<T>(check: &str, r: adelic_core::Result<T>, ok: impl FnOnce(T) -> CheckReport) -> CheckReport {
    match r {
        Ok(v) => ok(v),
        Err(e) => CheckReport::failed(check, e),
    }
}

pub fn norm(r: &Rational, p: Option<Prime>) -> Vec<CheckReport> {
    let report = match p {
        Some(p) => CheckReport::evaluated("norm", fmt_rational(&padic_norm(r, p))).input("p", p.to_string()),
        None => fail_or("norm-product", support(r), |ps| {
            let product = ps.iter().fold(real_norm(r), |acc, &p| acc * padic_norm(r, p));
            let gap = to_f64(&(&product - Rational::one())).abs();
            CheckReport::compared("norm-product", fmt_rational(&product), "1".into(), gap, tolerances::EXACT)
                .require(product.is_one())
                .detail("primes", ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","))
        }),
    };
    vec![report.input("r", fmt_rational(r))]
}

pub fn frac(r: &Rational, p: Prime) -> Vec<CheckReport> {
    vec![CheckReport::evaluated("frac", fmt_rational(&frac_part(r, p))).input("r", fmt_rational(r)).input("p", p.to_string())]
}

pub fn chi(r: &Rational, p: Option<Prime>) -> Vec<CheckReport> {
    let report = match p {
        Some(p) => {
            let z = chi_p(r, p);
            CheckReport::evaluated("chi", fmt_complex(z.to_complex()))
                .detail("phase", fmt_rational(z.phase()))
                .input("p", p.to_string())
        }
        None => {
            let z = chi_principal_phase(r);
            let gap = if z.is_one() { 0.0 } else { (z.to_complex() - 1.0).norm() };
            CheckReport::compared("chi-principal", fmt_complex(z.to_complex()), "1+0i".into(), gap, tolerances::EXACT)
                .detail("phase", fmt_rational(z.phase()))
        }
    };
    vec![report.input("r", fmt_rational(r))]
}

pub fn pair(
    cfg: &Config,
    dist: DistributionName,
    function: Option<&String>,
    a: Option<&Rational>,
    b: Option<&Rational>,
    alpha: Option<Complex64>,
) -> Result<Vec<CheckReport>, UsageError> {
    let (g, label) = load_function(function)?;
    let zero = Rational::from_integer(0.into());
    let b = b.unwrap_or(&zero);
    let (d, name): (AdelicDistribution, &str) = match dist {
        DistributionName::Delta => (distrib::delta_at(principal_adele(b)), "delta"),
        DistributionName::Chi => (distrib::chi(), "chi"),
        DistributionName::ChiQuad => {
            let a = a.ok_or_else(|| UsageError("chi-quad needs -a".into()))?;
            let a = principal_idele(a).map_err(|e| UsageError(e.to_string()))?;
            (distrib::chi_quadratic(a, principal_adele(b)), "chi-quad")
        }
        DistributionName::PiAlpha => {
            (distrib::pi_alpha(alpha.ok_or_else(|| UsageError("pi-alpha needs --alpha".into()))?), "pi-alpha")
        }
    };
    // δ and χ have an independent expected value: direct evaluation of φ
    // and of its transform at 1.
    let expected = match dist {
        DistributionName::Delta => Some(g.evaluate(&principal_adele(b))),
        DistributionName::Chi => Some(g.fourier().and_then(|f| f.evaluate(&principal_adele(&Rational::one())))),
        _ => None,
    };
    let check = format!("pair-{name}");
    let report = fail_or(&check, d.pair(&g), |pairing| {
        let counts = pairing.factor_counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        let base = match expected {
            Some(Ok(e)) => CheckReport::compared(
                &check,
                fmt_complex(pairing.value),
                fmt_complex(e),
                (pairing.value - e).norm(),
                cfg.tol(tolerances::CHI_PAIRING),
            ),
            Some(Err(err)) => CheckReport::failed(&check, err),
            None => CheckReport::evaluated(&check, fmt_complex(pairing.value)),
        };
        base.require(pairing.within_bounds()).detail("local_factors", counts)
    });
    let mut report = report.input("function", label);
    if let Some(a) = a {
        report = report.input("a", fmt_rational(a));
    }
    if dist != DistributionName::Chi {
        report = report.input("b", fmt_rational(b));
    }
    if let Some(al) = alpha {
        report = report.input("alpha", fmt_complex(al));
    }
    Ok(vec![report])
}

pub fn gauss(cfg: &Config, place: PlaceArg, a: &Rational, b: &Rational) -> Vec<CheckReport> {
    let report = match place {
        PlaceArg::Prime(p) => {
            let closed = gauss_closed_form_p(p, a, b);
            let oracle = integrate_qp(p, Integrand::Gauss { a, b }, &cfg.plan).map(|q| q.value);
            fail_or("gauss", closed.and_then(|c| oracle.map(|o| (c, o))), |(c, o)| {
                CheckReport::compared("gauss", fmt_cyclotomic(&c), fmt_cyclotomic(&o), exact_gap(&c, &o), cfg.tol(tolerances::EXACT))
                    .detail("complex", fmt_complex(c.to_complex()))
            })
            .input("p", p.to_string())
        }
        PlaceArg::Infinity => {
            let tol = cfg.tol(tolerances::GAUSS_REAL);
            let closed = gauss_closed_form_inf_rational(a, b);
            let oracle = fresnel(to_f64(a), to_f64(b), tol / 10.0).map(|q| q.value);
            let exact = gauss_closed_form_inf_exact(a, b);
            fail_or("gauss", closed.and_then(|c| oracle.map(|o| (c, o))), |(c, o)| {
                let r = CheckReport::compared("gauss", fmt_complex(c), fmt_complex(o), (c - o).norm(), tol);
                match exact {
                    Ok(e) => r.detail("exact", fmt_cyclotomic(&e)),
                    Err(_) => r,
                }
            })
            .input("p", "inf")
        }
    };
    vec![report.input("a", fmt_rational(a)).input("b", fmt_rational(b))]
}

pub fn product_check(cfg: &Config, a: &Rational, b: &Rational) -> Vec<CheckReport> {
    let report = fail_or("product-check", product_formula_check(a, b), |z| {
        let r = CheckReport::compared("product-check", fmt_complex(z), "1+0i".into(), (z - 1.0).norm(), cfg.tol(tolerances::PRODUCT_FORMULA));
        match product_formula_exact(a, b) {
            Ok(e) => r.detail("exact", fmt_cyclotomic(&e)),
            Err(_) => r,
        }
    });
    vec![report.input("a", fmt_rational(a)).input("b", fmt_rational(b))]
}

pub fn lambda_check(cfg: &Config, a: &Rational) -> Vec<CheckReport> {
    let report = fail_or("lambda-check", lambda_product_phase(a), |z| {
        let gap = if z.is_one() { 0.0 } else { (z.to_complex() - 1.0).norm() };
        CheckReport::compared("lambda-check", fmt_complex(z.to_complex()), "1+0i".into(), gap, cfg.tol(tolerances::LAMBDA_PRODUCT))
            .detail("phase", fmt_rational(z.phase()))
    });
    vec![report.input("a", fmt_rational(a))]
}

pub fn mellin(function: Option<&String>, alpha: Complex64) -> Result<Vec<CheckReport>, UsageError> {
    let (f, label) = load_elementary(function)?;
    let report = fail_or("mellin", phi_p(&f, alpha), |m| {
        let mut r = CheckReport::evaluated("mellin", fmt_complex(m.value))
            .detail("real", fmt_complex(m.real))
            .detail("zeta", fmt_complex(m.zeta));
        for (p, n) in &m.locals {
            r = r.detail(&format!("local_{p}"), fmt_complex(*n));
        }
        r
    });
    Ok(vec![report.input("alpha", fmt_complex(alpha)).input("function", label)])
}

pub fn tate(cfg: &Config, function: Option<&String>, alpha: Complex64) -> Result<Vec<CheckReport>, UsageError> {
    let (f, label) = load_elementary(function)?;
    let values = tate_check(&f, alpha).and_then(|res| {
        let lhs = phi_p(&f, alpha)?.value;
        let rhs = phi_p(&f.fourier()?, Complex64::new(1.0, 0.0) - alpha)?.value;
        Ok((res, lhs, rhs))
    });
    let report = fail_or("tate", values, |(res, lhs, rhs)| {
        CheckReport::compared("tate", fmt_complex(lhs), fmt_complex(rhs), res, cfg.tol(tolerances::TATE))
    });
    Ok(vec![report.input("alpha", fmt_complex(alpha)).input("function", label)])
}

pub fn zeta_fe(cfg: &Config, alpha: Complex64) -> Vec<CheckReport> {
    let values = functional_equation_residual(alpha).and_then(|res| {
        Ok((res, completed_zeta(alpha)?, completed_zeta(Complex64::new(1.0, 0.0) - alpha)?))
    });
    let report = fail_or("zeta-fe", values, |(res, lhs, rhs)| {
        CheckReport::compared("zeta-fe", fmt_complex(lhs), fmt_complex(rhs), res, cfg.tol(tolerances::ZETA_FE))
    });
    vec![report.input("alpha", fmt_complex(alpha))]
}

pub fn oscillator_check(cfg: &Config, p: Prime, t: &Rational, samples: &[Rational], energy: &Rational) -> Vec<CheckReport> {
    let approx = PAdicApprox::new(p, t.clone(), cfg.precision);
    let samples: Vec<Rational> = if samples.is_empty() {
        vec![Rational::from_integer(0.into()), p.rpow(-1), Rational::one(), p.rpow(1)]
    } else {
        samples.to_vec()
    };
    let tol = cfg.tol(tolerances::EXACT);
    let mut out = Vec::new();
    match trig_defects(&approx) {
        Ok((pyth, double)) => {
            out.push(CheckReport::compared("trig-pythagoras", "sin²t+cos²t".into(), "1".into(), pyth, tol));
            out.push(CheckReport::compared("trig-double-angle", "sin 2t".into(), "2 sin t cos t".into(), double, tol));
        }
        Err(e) => out.push(CheckReport::failed("trig", e)),
    }
    out.push(fail_or("eigen", eigen_check(&approx, &omega_state(p), energy, &samples), |dev| {
        CheckReport::compared("eigen", fmt_complex(Complex64::new(dev, 0.0)), "0".into(), dev, tol)
    }));
    let list = samples.iter().map(fmt_rational).collect::<Vec<_>>().join(",");
    out.into_iter()
        .map(|r| {
            r.input("p", p.to_string())
                .input("t", fmt_rational(t))
                .input("precision", cfg.precision.to_string())
                .input("energy", fmt_rational(energy))
                .input("samples", list.clone())
        })
        .collect()
}

pub fn calibrate_lambda(cfg: &Config, p: Prime) -> Vec<CheckReport> {
    match calibrate(p, &cfg.plan) {
        Err(e) => vec![CheckReport::failed("lambda-calibration", e).input("p", p.to_string())],
        Ok(cells) => cells
            .into_iter()
            .map(|c| {
                let gap = if c.agrees() { 0.0 } else { (c.oracle.to_complex() - c.table.to_complex()).norm() };
                CheckReport::compared(
                    "lambda-calibration",
                    fmt_rational(c.oracle.phase()),
                    fmt_rational(c.table.phase()),
                    gap,
                    cfg.tol(tolerances::EXACT),
                )
                .input("p", p.to_string())
                .input("parity", c.parity.to_string())
                .input("residue", c.residue.to_string())
            })
            .collect(),
    }
}

/// Dispatches a parsed command other than `suite`.
pub fn run(cfg: &Config, cmd: &Command) -> Result<Vec<CheckReport>, UsageError> {
    Ok(match cmd {
        Command::Norm { r, p } => norm(r, *p),
        Command::Frac { r, p } => frac(r, *p),
        Command::Chi { r, p } => chi(r, *p),
        Command::Pair { dist, function, a, b, alpha } => pair(cfg, *dist, function.as_ref(), a.as_ref(), b.as_ref(), *alpha)?,
        Command::Gauss { p, a, b } => gauss(cfg, *p, a, b),
        Command::ProductCheck { a, b } => product_check(cfg, a, b),
        Command::LambdaCheck { a } => lambda_check(cfg, a),
        Command::Mellin { alpha, function } => mellin(function.as_ref(), *alpha)?,
        Command::Tate { alpha, function } => tate(cfg, function.as_ref(), *alpha)?,
        Command::ZetaFe { alpha } => zeta_fe(cfg, *alpha),
        Command::OscillatorCheck { p, t, samples, energy } => oscillator_check(cfg, *p, t, samples, energy),
        Command::CalibrateLambda { p } => calibrate_lambda(cfg, *p),
        Command::Suite { .. } => return Err(UsageError("suite is dispatched separately".into())),
    })
}
