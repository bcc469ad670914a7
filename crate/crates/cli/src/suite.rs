//! The acceptance grid. Each criterion draws its pseudorandom inputs from
//! its own ChaCha stream, so any subset reproduces the same reports as the
//! full run.

use std::collections::BTreeSet;
use std::f64::consts::SQRT_2;

use adelic_core::bruhat::{Ball, ElementaryFunction, PAdicTestFunction, RealTestFunction, SchwartzBruhat, Term};
use adelic_core::characters::{chi_p, chi_principal_phase, UnitPhase};
use adelic_core::cyclotomic::Cyclotomic;
use adelic_core::distrib;
use adelic_core::gauss::{gauss_closed_form_inf_rational, gauss_closed_form_p, lambda_product_phase, product_formula_check};
use adelic_core::integrate::{fresnel, integrate_qp, integrate_real, Integrand};
use adelic_core::meltate::{functional_equation_residual, tate_check, vacuum_constant, zeta};
use adelic_core::oscillator::{eigen_check, omega_state, real_state_orthonormality, vacuum_fourier_check};
use adelic_core::characters::chi_inf;
use adelic_core::qcore::{int, padic_norm, principal_adele, real_norm, support, to_f64, PAdicApprox, Prime, Rational};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::commands::{exact_gap, trig_defects, Config, UsageError};
use crate::report::{fmt_complex, fmt_real, CheckReport};
use crate::tolerances;

/// Base seed of the pseudorandom grids.
pub const SEED: u64 = 0x00ad_e11c;

type Runner = fn(&Config, &mut ChaCha8Rng) -> Vec<CheckReport>;

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub title: &'static str,
    run: Runner,
}

pub const CRITERIA: [Criterion; 10] = [
    Criterion { id: 1, name: "norm", title: "norm product formula", run: norm_product },
    Criterion { id: 2, name: "chi", title: "principal character is trivial", run: principal_character },
    Criterion { id: 3, name: "gauss", title: "Gauss closed form against the integration oracles", run: gauss_grid },
    Criterion { id: 4, name: "product", title: "Gauss and λ product formulas", run: product_formulas },
    Criterion { id: 5, name: "fourier", title: "p-adic Fourier calculus", run: fourier_calculus },
    Criterion { id: 6, name: "tate", title: "Tate formula in the critical strip", run: tate_formula },
    Criterion { id: 7, name: "zeta", title: "Riemann functional equation", run: zeta_functional_equation },
    Criterion { id: 8, name: "vacuum", title: "vacuum Mellin transform", run: vacuum_mellin },
    Criterion { id: 9, name: "oscillator", title: "oscillator identities and vacuum invariance", run: oscillator },
    Criterion { id: 10, name: "pairing", title: "δ and χ pairings", run: pairings },
];

/// Outcome of one criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub title: &'static str,
    pub pass: bool,
    pub reports: Vec<CheckReport>,
}

/// Criteria named by `only` (names or numbers); all when empty.
pub fn select(only: &[String]) -> Result<Vec<&'static Criterion>, UsageError> {
    if only.is_empty() {
        return Ok(CRITERIA.iter().collect());
    }
    let mut ids = BTreeSet::new();
    for key in only {
        let c = CRITERIA
            .iter()
            .find(|c| c.name == key || c.id.to_string() == *key)
            .ok_or_else(|| UsageError(format!("unknown criterion '{key}'")))?;
        ids.insert(c.id);
    }
    Ok(CRITERIA.iter().filter(|c| ids.contains(&c.id)).collect())
}

pub fn run_criterion(cfg: &Config, c: &Criterion) -> CriterionOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ u64::from(c.id));
    let reports: Vec<CheckReport> =
        (c.run)(cfg, &mut rng).into_iter().map(|r| r.input("criterion", c.id.to_string())).collect();
    CriterionOutcome { id: c.id, name: c.name, title: c.title, pass: reports.iter().all(|r| r.pass), reports }
}

pub fn summary_table(outcomes: &[CriterionOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&format!("{:>2}  {:<10}  {}  {}\n", o.id, o.name, if o.pass { "PASS" } else { "FAIL" }, o.title));
        for r in &o.reports {
            out.push_str(&format!(
                "      {:<24} {}  err {} (tol {})\n",
                r.check,
                if r.pass { "ok  " } else { "FAIL" },
                fmt_real(r.abs_error),
                fmt_real(r.tolerance)
            ));
            if let Some(e) = &r.error {
                out.push_str(&format!("        error: {e}\n"));
            }
        }
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    out.push_str(&format!("{passed}/{} criteria passed\n", outcomes.len()));
    out
}

#[derive(Serialize)]
struct Summary<'a> {
    suite: &'static str,
    pass: bool,
    criteria: Vec<SummaryRow<'a>>,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    id: u8,
    name: &'a str,
    pass: bool,
    checks: usize,
}

pub fn summary_json(outcomes: &[CriterionOutcome]) -> String {
    let s = Summary {
        suite: "acceptance",
        pass: outcomes.iter().all(|o| o.pass),
        criteria: outcomes.iter().map(|o| SummaryRow { id: o.id, name: o.name, pass: o.pass, checks: o.reports.len() }).collect(),
    };
    serde_json::to_string(&s).expect("summary serializes")
}

fn p(n: u64) -> Prime {
    Prime::new(n).expect("small prime")
}

/// Worst-case tracker for a batch of comparisons.
struct Batch {
    cases: usize,
    mismatches: usize,
    worst: f64,
    errors: Vec<String>,
}

impl Batch {
    fn new() -> Self {
        Batch { cases: 0, mismatches: 0, worst: 0.0, errors: Vec::new() }
    }

    fn add(&mut self, err: f64, exact: bool) {
        self.cases += 1;
        if !exact {
            self.mismatches += 1;
        }
        if err.is_nan() || err > self.worst {
            self.worst = if err.is_nan() { f64::INFINITY } else { err };
        }
    }

    fn error(&mut self, context: String, e: impl std::fmt::Display) {
        self.cases += 1;
        self.mismatches += 1;
        self.worst = f64::INFINITY;
        if self.errors.len() < 3 {
            self.errors.push(format!("{context}: {e}"));
        }
    }

    /// Aggregate report; `exact` demands no mismatches besides the bound.
    fn report(self, check: &str, tol: f64, exact: bool) -> CheckReport {
        let mut r = CheckReport::compared(check, fmt_real(self.worst), "0".into(), self.worst, tol)
            .require(!exact || self.mismatches == 0)
            .require(self.errors.is_empty())
            .input("cases", self.cases.to_string());
        if exact {
            r = r.detail("mismatches", self.mismatches.to_string());
        }
        if !self.errors.is_empty() {
            r.error = Some(self.errors.join("; "));
        }
        r
    }
}

fn random_rational(rng: &mut ChaCha8Rng, bound: i64, allow_zero: bool) -> Rational {
    let lo = if allow_zero { 0 } else { 1 };
    let n = rng.gen_range(lo..=bound) * if rng.gen_bool(0.5) { -1 } else { 1 };
    Rational::new(n.into(), rng.gen_range(1..=bound).into())
}

/// A random test function at `p`: up to three ball terms with small
/// rational coefficients, eighth-root phases and characters.
pub fn random_padic(rng: &mut ChaCha8Rng, q: Prime) -> PAdicTestFunction {
    let mut f = PAdicTestFunction::zero(q);
    let pp = BigInt::from(q.get());
    for _ in 0..rng.gen_range(1..=3) {
        let c = Rational::new(rng.gen_range(1i64..=4).into(), rng.gen_range(1i64..=3).into());
        let c = if rng.gen_bool(0.3) { -c } else { c };
        let center = Rational::new(rng.gen_range(-20i64..=20).into(), pp.pow(rng.gen_range(0u32..=2)));
        let freq = Rational::new(rng.gen_range(0i64..=4).into(), pp.pow(rng.gen_range(0u32..=1)));
        let k = rng.gen_range(-2i64..=2);
        let coeff = Cyclotomic::term(c, UnitPhase::from_ratio(rng.gen_range(0..8), 8));
        f.push(Term::new(coeff, freq, Ball::new(q, center, k))).expect("same prime");
    }
    f
}

fn random_subset(rng: &mut ChaCha8Rng, primes: &[u64]) -> Vec<Prime> {
    loop {
        let s: Vec<Prime> = primes.iter().filter(|_| rng.gen_bool(0.5)).map(|&q| p(q)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

fn norm_product(_cfg: &Config, rng: &mut ChaCha8Rng) -> Vec<CheckReport> {
    let mut b = Batch::new();
    for _ in 0..1000 {
        let r = random_rational(rng, 1_000_000, false);
        match support(&r) {
            Ok(ps) => {
                let product = ps.iter().fold(real_norm(&r), |acc, &q| acc * padic_norm(&r, q));
                b.add(to_f64(&(&product - Rational::one())).abs(), product.is_one());
            }
            Err(e) => b.error(r.to_string(), e),
        }
    }
    vec![b.report("norm-product", tolerances::EXACT, true)]
}

fn principal_character(_cfg: &Config, rng: &mut ChaCha8Rng) -> Vec<CheckReport> {
    let mut b = Batch::new();
    for _ in 0..1000 {
        let z = chi_principal_phase(&random_rational(rng, 1_000_000, true));
        b.add(if z.is_one() { 0.0 } else { (z.to_complex() - 1.0).norm() }, z.is_one());
    }
    vec![b.report("chi-principal", tolerances::EXACT, true)]
}

/// `a = ±p^v r` over unit residues `r` (mod 8 at 2) and the four `b` values.
fn gauss_cases(q: u64) -> Vec<(Rational, Rational)> {
    let pq = p(q);
    let residues: Vec<i64> = if q == 2 { vec![1, 3, 5, 7] } else { (1..q as i64).collect() };
    let bs = [int(0), int(1), pq.rpow(-1), int(3) * pq.rpow(-2)];
    let mut out = Vec::new();
    for v in -2..=2 {
        for &r in &residues {
            for sign in [1, -1] {
                let a = pq.rpow(v) * int(sign * r);
                for b in &bs {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
    }
    out
}

fn gauss_grid(cfg: &Config, _rng: &mut ChaCha8Rng) -> Vec<CheckReport> {
    let mut padic = Batch::new();
    let mut real_cases = BTreeSet::new();
    for q in [2u64, 3, 5, 7] {
        for (a, b) in gauss_cases(q) {
            let closed = gauss_closed_form_p(p(q), &a, &b);
            let oracle = integrate_qp(p(q), Integrand::Gauss { a: &a, b: &b }, &cfg.plan);
            match (closed, oracle) {
                (Ok(c), Ok(o)) => b_add_exact(&mut padic, &c, &o.value),
                (Err(e), _) | (_, Err(e)) => padic.error(format!("p = {q}, a = {a}, b = {b}"), e),
            }
            real_cases.insert((a, b));
        }
    }
    let tol = cfg.tol(tolerances::GAUSS_REAL);
    let mut real = Batch::new();
    for (a, b) in &real_cases {
        let (af, bf) = (to_f64(a), to_f64(b));
        match (gauss_closed_form_inf_rational(a, b), fresnel(af, bf, tol / 10.0)) {
            (Ok(c), Ok(q)) => real.add((c - q.value).norm(), true),
            (Err(e), _) | (_, Err(e)) => real.error(format!("a = {a}, b = {b}"), e),
        }
    }
    vec![padic.report("gauss-padic", cfg.tol(tolerances::EXACT), true), real.report("gauss-real", tol, false)]
}

fn b_add_exact(b: &mut Batch, x: &Cyclotomic, y: &Cyclotomic) {
    let gap = exact_gap(x, y);
    b.add(gap, gap == 0.0);
}

fn product_formulas(cfg: &Config, rng: &mut ChaCha8Rng) -> Vec<CheckReport> {
    let mut gauss = Batch::new();
    for _ in 0..100 {
        let a = random_rational(rng, 10_000, false);
        let b = random_rational(rng, 10_000, true);
        match product_formula_check(&a, &b) {
            Ok(z) => gauss.add((z - 1.0).norm(), true),
            Err(e) => gauss.error(format!("a = {a}, b = {b}"), e),
        }
    }
    let mut lambda = Batch::new();
    for _ in 0..100 {
        let a = random_rational(rng, 1_000_000, false);
        match lambda_product_phase(&a) {
            Ok(z) => lambda.add(if z.is_one() { 0.0 } else { (z.to_complex() - 1.0).norm() }, true),
            Err(e) => lambda.error(format!("a = {a}"), e),
        }
    }
    vec![
        gauss.report("gauss-product", cfg.tol(tolerances::PRODUCT_FORMULA), false),
        lambda.report("lambda-product", cfg.tol(tolerances::LAMBDA_PRODUCT), false),
    ]
}

fn fourier_calculus(_cfg: &Config, rng: &mut ChaCha8Rng) -> Vec<CheckReport> {
    let primes = [2u64, 3, 5, 7];
    let mut involution = Batch::new();
    let mut plancherel = Batch::new();
    for i in 0..100 {
        let q = p(primes[i % primes.len()]);
        let f = random_padic(rng, q);
        let ft = f.fourier();
        match ft.fourier().equals(&f.reflect()) {
            Ok(eq) => involution.add(if eq { 0.0 } else { 1.0 }, eq),
            Err(e) => involution.error(format!("p = {q}"), e),
        }
        match (f.l2_norm_sq(), ft.l2_norm_sq()) {
            (Ok(x), Ok(y)) => b_add_exact(&mut plancherel, &x, &y),
            (Err(e), _) | (_, Err(e)) => plancherel.error(format!("p = {q}"), e),
        }
    }
    let mut omega = Batch::new();
    for q in [2u64, 3, 5, 7, 11] {
        let om = PAdicTestFunction::omega(p(q));
        match om.fourier().equals(&om) {
            Ok(eq) => omega.add(if eq { 0.0 } else { 1.0 }, eq),
            Err(e) => omega.error(format!("p = {q}"), e),
        }
    }
    vec![
        involution.report("fourier-involution", tolerances::EXACT, true),
        plancherel.report("plancherel", tolerances::EXACT, true),
        omega.report("omega-self-dual", tolerances::EXACT, true),
    ]
}

fn strip_point(rng: &mut ChaCha8Rng, im_bound: f64) -> Complex64 {
    Complex64::new(rng.gen_range(0.05..0.95), rng.gen_range(-im_bound..=im_bound))
}

fn tate_formula(cfg: &Config, rng: &mut ChaCha8Rng) -> Vec<CheckReport> {
    let points: Vec<Complex64> = (0..10).map(|_| strip_point(rng, 5.0)).collect();
    let mut b = Batch::new();
    for _ in 0..20 {
        let mut f = ElementaryFunction::new(RealTestFunction::gaussian());
        for q in random_subset(rng, &[2, 3, 5]) {
            f = f.with_local(random_padic(rng, q));
        }
        for &alpha in &points {
            match tate_check(&f, alpha) {
                Ok(res) => b.add(res, true),
                Err(e) => b.error(format!("α = {alpha}"), e),
            }
        }
    }
    vec![b.report("tate", cfg.tol(tolerances::TATE), false)]
}

fn zeta_functional_equation(cfg: &Config, rng: &mut ChaCha8Rng) -> Vec<CheckReport> {
    let mut b = Batch::new();
    for _ in 0..20 {
        let alpha = strip_point(rng, 30.0);
        match functional_equation_residual(alpha) {
            Ok(res) => b.add(res, true),
            Err(e) => b.error(format!("α = {alpha}"), e),
        }
    }
    let probe = Complex64::new(0.5, 14.134725);
    let zero = match zeta(probe) {
        Ok(z) => CheckReport::compared("zeta-first-zero", fmt_complex(z), "0".into(), z.norm(), tolerances::ZETA_FIRST_ZERO),
        Err(e) => CheckReport::failed("zeta-first-zero", e),
    };
    vec![b.report("zeta-fe", cfg.tol(tolerances::ZETA_FE), false), zero.input("alpha", fmt_complex(probe))]
}

fn vacuum_mellin(cfg: &Config, _rng: &mut ChaCha8Rng) -> Vec<CheckReport> {
    let cs: Result<Vec<Complex64>, _> = [2.0, 3.0, 4.0].iter().map(|&a| vacuum_constant(Complex64::new(a, 0.0))).collect();
    let report = match cs {
        Err(e) => CheckReport::failed("vacuum-constant", e),
        Ok(cs) => {
            let c = cs[0];
            let spread = cs.iter().map(|x| (x - c).norm() / c.norm()).fold(0.0, f64::max);
            CheckReport::compared("vacuum-constant", fmt_complex(c), "n/a".into(), spread, cfg.tol(tolerances::VACUUM_RELATIVE))
                .detail("c_over_sqrt2", fmt_complex(c / SQRT_2))
                .detail("c_over_2_pow_quarter", fmt_complex(c / 2f64.powf(0.25)))
        }
    };
    vec![report.input("alpha", "2,3,4")]
}

fn oscillator(cfg: &Config, _rng: &mut ChaCha8Rng) -> Vec<CheckReport> {
    let mut trig = Batch::new();
    let mut eigen = Batch::new();
    for q in [3u64, 5, 7] {
        let pq = p(q);
        for u in [1i64, 2, 4, -3] {
            for t in [pq.rpow(1) * int(u), pq.rpow(2) * int(u)] {
                match trig_defects(&PAdicApprox::new(pq, t.clone(), tolerances::TRIG_PRECISION)) {
                    Ok((a, b)) => {
                        trig.add(a, a == 0.0);
                        trig.add(b, b == 0.0);
                    }
                    Err(e) => trig.error(format!("p = {q}, t = {t}"), e),
                }
            }
        }
        let samples = [int(0), pq.rpow(-1), int(1), pq.rpow(1)];
        for u in [1i64, 2] {
            let t = PAdicApprox::new(pq, pq.rpow(1) * int(u), cfg.precision);
            match eigen_check(&t, &omega_state(pq), &Rational::zero(), &samples) {
                Ok(dev) => eigen.add(dev, dev == 0.0),
                Err(e) => eigen.error(format!("p = {q}"), e),
            }
        }
    }
    let fourier = match vacuum_fourier_check() {
        Ok(r) => CheckReport::compared(
            "vacuum-fourier",
            fmt_real(r.real_sup_error),
            "0".into(),
            r.real_sup_error,
            cfg.tol(tolerances::VACUUM_FOURIER),
        )
        .require(r.padic.iter().all(|(_, ok)| *ok)),
        Err(e) => CheckReport::failed("vacuum-fourier", e),
    };
    let gram = match real_state_orthonormality(tolerances::HERMITE_GRAM_DEGREE) {
        Ok(g) => CheckReport::compared("hermite-gram", fmt_real(g), "0".into(), g, cfg.tol(tolerances::HERMITE_GRAM))
            .input("max_degree", tolerances::HERMITE_GRAM_DEGREE.to_string()),
        Err(e) => CheckReport::failed("hermite-gram", e),
    };
    vec![
        trig.report("trig-identities", tolerances::EXACT, true).input("precision", tolerances::TRIG_PRECISION.to_string()),
        eigen.report("vacuum-eigen", tolerances::EXACT, true),
        fourier,
        gram,
    ]
}

/// A random elementary function with primes from `{2, 3, 5, 7}` and a
/// Hermite real factor of degree at most 3.
fn random_elementary(rng: &mut ChaCha8Rng) -> ElementaryFunction {
    let real = (0..rng.gen_range(1..=2))
        .map(|_| (Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)), rng.gen_range(0u32..=3)))
        .collect();
    let mut f = ElementaryFunction::new(RealTestFunction::Hermite(real));
    for q in random_subset(rng, &[2, 3, 5, 7]) {
        f = f.with_local(random_padic(rng, q));
    }
    f
}

/// `φ̃_p(1) = Σ_c φ(c) χ_p(c) p^{-m}` over cosets of `p^m Z_p`, `m ≥ 0`,
/// on which both `φ` and `χ_p` are constant.
fn padic_fourier_at_one(f: &PAdicTestFunction) -> adelic_core::Result<Cyclotomic> {
    let m = f.level().unwrap_or(0).max(0);
    let s = f.step(m)?;
    let mut acc = Cyclotomic::zero();
    for (c, v) in s.values() {
        acc = &acc + &v.rotate(&chi_p(c, f.prime()));
    }
    Ok(acc.scale(&f.prime().rpow(-m)).reduced())
}

fn pairings(cfg: &Config, rng: &mut ChaCha8Rng) -> Vec<CheckReport> {
    let mut sift = Batch::new();
    let mut chi = Batch::new();
    let mut nonzero = 0;
    for _ in 0..50 {
        let f = random_elementary(rng);
        let q = [2i64, 3, 5, 6, 9, 25][rng.gen_range(0..6)];
        let x = Rational::new(rng.gen_range(-30i64..=30).into(), q.into());
        let g = SchwartzBruhat::single(f.clone());

        // δ_x against a direct product of the local values.
        let xa = principal_adele(&x);
        let mut exact = Cyclotomic::one();
        for local in f.locals().values() {
            exact = &exact * &local.evaluate(&x);
        }
        let outside_ball = xa.primes().any(|pp| !f.locals().contains_key(&pp) && padic_norm(&x, pp) > Rational::one());
        if outside_ball {
            exact = Cyclotomic::zero();
        }
        let direct = f.real().evaluate(to_f64(&x)) * exact.to_complex();
        if direct != Complex64::zero() {
            nonzero += 1;
        }
        match distrib::delta_at(xa).pair(&g) {
            Ok(v) => {
                let gap = (v.value - direct).norm();
                sift.add(gap, gap == 0.0);
            }
            Err(e) => sift.error(format!("x = {x}"), e),
        }

        // χ against transforms computed by coset sums and quadrature.
        let padic: adelic_core::Result<Cyclotomic> = f
            .locals()
            .values()
            .try_fold(Cyclotomic::one(), |acc, local| Ok(&acc * &padic_fourier_at_one(local)?));
        let real = integrate_real(&|t| f.real().evaluate(t) * chi_inf(t), &cfg.quadrature);
        match (padic, real, distrib::chi().pair(&g)) {
            (Ok(pv), Ok(rv), Ok(v)) => chi.add((v.value - rv.value * pv.to_complex()).norm(), true),
            (Err(e), _, _) | (_, _, Err(e)) => chi.error(String::from("χ pairing"), e),
            (_, Err(e), _) => chi.error(String::from("χ quadrature"), e),
        }
    }
    vec![
        sift.report("delta-sifting", tolerances::EXACT, true).detail("nonzero_values", nonzero.to_string()),
        chi.report("chi-pairing", cfg.tol(tolerances::CHI_PAIRING), false),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection() {
        assert_eq!(select(&[]).unwrap().len(), 10);
        let s = select(&["gauss".into(), "1".into()]).unwrap();
        assert_eq!(s.iter().map(|c| c.id).collect::<Vec<_>>(), vec![1, 3]);
        assert!(select(&["nope".into()]).is_err());
    }

    #[test]
    fn gauss_grid_size() {
        // 5 valuations × residues × 2 signs × 4 values of b
        assert_eq!(gauss_cases(2).len(), 5 * 4 * 2 * 4);
        assert_eq!(gauss_cases(7).len(), 5 * 6 * 2 * 4);
    }

    #[test]
    fn streams_are_reproducible() {
        let cfg = Config::default();
        let a = run_criterion(&cfg, &CRITERIA[0]);
        let b = run_criterion(&cfg, &CRITERIA[0]);
        assert_eq!(a.reports, b.reports);
        assert!(a.pass);
    }

    #[test]
    fn coset_fourier_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2u64, 3, 5] {
            for _ in 0..10 {
                let f = random_padic(&mut rng, p(q));
                assert_eq!(padic_fourier_at_one(&f).unwrap(), f.fourier().evaluate(&int(1)).reduced());
            }
        }
    }
}
