use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{ToPrimitive, Zero};

use crate::bruhat::{Ball, PAdicTestFunction};
use crate::characters::chi_p;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::qcore::{int, residue_mod, valuation, Prime, Rational, Valuation};

/// How an integral over `Q_p` is split into spheres `|x|_p = p^j` and how
/// far residue sums may be refined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereDecompositionPlan {
    /// Smallest sphere index that may be evaluated.
    pub sphere_low: i64,
    /// Largest sphere index that may be evaluated.
    pub sphere_high: i64,
    /// Cap on the number of cosets in a single residue sum.
    pub max_cosets: u64,
}

impl Default for SphereDecompositionPlan {
    fn default() -> Self {
        SphereDecompositionPlan { sphere_low: -64, sphere_high: 64, max_cosets: 1 << 23 }
    }
}

/// A residue sum confirmed by a second, finer refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct Stabilized {
    pub value: Cyclotomic,
    /// Refinement level `m` (cosets of `p^m Z_p`) at which the sum was taken.
    pub level: i64,
}

/// Result of a sphere decomposition over `Q_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct QpIntegral {
    pub value: Cyclotomic,
    /// The integral over the ball `p^{-inner} Z_p`, where the decomposition starts.
    pub inner_index: i64,
    pub inner_value: Cyclotomic,
    /// Every sphere with index `≥ tail_index` contributes exactly zero.
    pub tail_index: i64,
    /// Contributions of the spheres `inner < j < tail_index`.
    pub spheres: Vec<(i64, Cyclotomic)>,
}

fn neg_val(v: Valuation) -> i64 {
    match v {
        Valuation::Finite(v) => -v,
        Valuation::Infinite => i64::MIN / 4,
    }
}

/// Largest modulus whose residue histogram is kept as a dense array.
const DENSE_RESIDUES: u64 = 1 << 24;

/// `p^{-m} Σ_{y mod p^m} χ_p(A y² + B y)`, exact.
///
/// The residues `A y² + B y mod p^e` are generated by second differences,
/// counted, and folded into the basis of `Q(ζ_{p^e})` before any
/// cyclotomic arithmetic: a residue with top digit `p - 1` is replaced by
/// minus the other `p - 1` residues of its class.
fn residue_sum(p: Prime, qa: &Rational, qb: &Rational, m: i64, cap: u64) -> Result<Cyclotomic> {
    // The loop is cheap machine arithmetic, so only the plan's cap applies
    // here, not the global bound on enumerated balls.
    let count = u32::try_from(m.max(0)).ok().and_then(|e| p.get().checked_pow(e)).filter(|&c| c <= cap).ok_or_else(|| {
        Error::NotStabilized(alloc::format!("refinement level {m} exceeds the coset cap at p = {p}"))
    })?;
    let e = neg_val(valuation(qa, p)).max(neg_val(valuation(qb, p))).max(0);
    let pe = p.rpow(e);
    let modulus = pe.to_integer();
    let md = modulus.to_u64().filter(|&m| m < 1 << 62).ok_or_else(|| {
        Error::NotStabilized(alloc::format!("denominator {p}^{e} exceeds the exact residue range"))
    })?;
    let res = |r: &Rational| residue_mod(&(r * &pe), &modulus, p).to_u64().expect("residue below modulus");
    let (alpha, beta) = (res(qa), res(qb));
    let add = |x: u64, y: u64| {
        let s = x + y;
        if s >= md {
            s - md
        } else {
            s
        }
    };
    let two_alpha = add(alpha, alpha);
    // f(y) and f(y + 1) - f(y) = A(2y + 1) + B, both mod p^e
    let mut value = 0u64;
    let mut step = add(alpha, beta);
    let scale = p.rpow(-m);
    if md <= DENSE_RESIDUES {
        let mut hist = alloc::vec![0i64; md as usize];
        for _ in 0..count {
            hist[value as usize] += 1;
            value = add(value, step);
            step = add(step, two_alpha);
        }
        if e > 0 {
            let top = md / p.get();
            for r in (p.get() - 1) * top..md {
                let c = core::mem::take(&mut hist[r as usize]);
                if c != 0 {
                    for j in 0..p.get() - 1 {
                        hist[(r - (p.get() - 1 - j) * top) as usize] -= c;
                    }
                }
            }
        }
        let nonzero = hist.iter().enumerate().filter(|(_, &c)| c != 0).map(|(r, &c)| (r as u64, c));
        return Ok(Cyclotomic::from_histogram(nonzero, &modulus, &scale).reduced());
    }
    let mut hist: BTreeMap<u64, i64> = BTreeMap::new();
    for _ in 0..count {
        *hist.entry(value).or_insert(0) += 1;
        value = add(value, step);
        step = add(step, two_alpha);
    }
    Ok(Cyclotomic::from_histogram(hist, &modulus, &scale).reduced())
}

/// `∫_{Z_p} χ_p(A y² + B y) dy`, at the smallest level where the integrand is
/// locally constant and confirmed one level finer.
pub fn integrate_zp_quadratic(p: Prime, qa: &Rational, qb: &Rational, cap: u64) -> Result<Stabilized> {
    let two_a = qa * int(2);
    let m0 = 0i64
        .max(neg_val(valuation(&two_a, p)))
        .max(neg_val(valuation(qa, p)).div_euclid(2) + neg_val(valuation(qa, p)).rem_euclid(2))
        .max(neg_val(valuation(qb, p)));
    let coarse = residue_sum(p, qa, qb, m0, cap)?;
    let fine = residue_sum(p, qa, qb, m0 + 1, cap.saturating_mul(p.get()))?;
    if coarse != fine {
        return Err(Error::NotStabilized(alloc::format!("levels {m0} and {} disagree at p = {p}", m0 + 1)));
    }
    Ok(Stabilized { value: coarse, level: m0 })
}

/// `∫_{ball} χ_p(a x² + b x) dx` with `∫_{Z_p} dx = 1`.
///
/// Substituting `x = c + p^k y` reduces it to an integral over `Z_p` with
/// `A = a p^{2k}` and `B = (2ac + b) p^k`.
pub fn integrate_ball_character(ball: &Ball, a: &Rational, b: &Rational) -> Result<Stabilized> {
    integrate_ball_character_capped(ball, a, b, SphereDecompositionPlan::default().max_cosets)
}

pub fn integrate_ball_character_capped(ball: &Ball, a: &Rational, b: &Rational, cap: u64) -> Result<Stabilized> {
    let p = ball.prime();
    let k = ball.radius_exp();
    let c = ball.center();
    let pk = p.rpow(k);
    let qa = a * &pk * &pk;
    let qb = (a * c * int(2) + b) * &pk;
    let inner = integrate_zp_quadratic(p, &qa, &qb, cap)?;
    let phase = chi_p(&(a * c * c + b * c), p);
    Ok(Stabilized { value: inner.value.rotate(&phase).scale(&ball.measure()), level: inner.level + k })
}

/// What is being integrated over `Q_p`.
#[derive(Debug, Clone, Copy)]
pub enum Integrand<'a> {
    /// A test function.
    Function(&'a PAdicTestFunction),
    /// `χ_p(a x² + b x)` alone, `a ≠ 0`.
    Gauss { a: &'a Rational, b: &'a Rational },
    /// `f(x) χ_p(a x² + b x)`.
    Weighted { f: &'a PAdicTestFunction, a: &'a Rational, b: &'a Rational },
}

/// Largest `j` such that the Gauss integrand is identically 1 on `p^{-j} Z_p`.
fn gauss_inner(p: Prime, a: &Rational, b: &Rational) -> i64 {
    let va = valuation(a, p).finite().expect("a ≠ 0");
    let j = va.div_euclid(2);
    match valuation(b, p) {
        Valuation::Finite(vb) => j.min(vb),
        Valuation::Infinite => j,
    }
}

/// Smallest `j` such that every sphere `|x|_p = p^{j'}`, `j' ≥ j`, contributes
/// zero to `∫ χ_p(a x² + b x)`. On such a sphere the quadratic term oscillates
/// at depth `n = 2j' - v(a)` and the stationary point `-b/2a` is not a unit
/// multiple of the sphere, so residue sums cancel.
fn gauss_tail(p: Prime, a: &Rational, b: &Rational) -> i64 {
    let va = valuation(a, p).finite().expect("a ≠ 0");
    let v2 = i64::from(p.get() == 2);
    let vb = valuation(b, p).finite();
    let mut j = gauss_inner(p, a, b) + 1;
    loop {
        let n = 2 * j - va;
        let deep = n >= 2 * (1 + v2);
        let off_center = vb.is_none_or(|vb| vb - j + n - v2 > 0);
        if deep && off_center {
            return j;
        }
        j += 1;
    }
}

/// `∫_{ball} integrand`.
fn ball_integral(integrand: Integrand<'_>, ball: &Ball, cap: u64) -> Result<Cyclotomic> {
    let zero = Rational::zero();
    let (f, a, b) = match integrand {
        Integrand::Function(f) => (Some(f), &zero, &zero),
        Integrand::Gauss { a, b } => (None, a, b),
        Integrand::Weighted { f, a, b } => (Some(f), a, b),
    };
    match f {
        None => Ok(integrate_ball_character_capped(ball, a, b, cap)?.value),
        Some(f) => {
            let mut acc = Cyclotomic::zero();
            for t in f.mul(&PAdicTestFunction::indicator(ball.clone())).terms() {
                let part = integrate_ball_character_capped(t.ball(), a, &(b + t.frequency()), cap)?;
                acc = &acc + &(t.coeff() * &part.value);
            }
            Ok(acc.reduced())
        }
    }
}

/// `∫_{Q_p} integrand dx` by sphere decomposition.
///
/// The decomposition starts at a ball on which the integrand is constant,
/// adds spheres one at a time, and stops at an index beyond which every
/// sphere provably vanishes; one further sphere is evaluated to confirm it.
pub fn integrate_qp(p: Prime, integrand: Integrand<'_>, plan: &SphereDecompositionPlan) -> Result<QpIntegral> {
    let (inner, tail) = match integrand {
        Integrand::Function(f) => function_range(p, f)?,
        Integrand::Gauss { a, b } => {
            if a.is_zero() {
                return Err(Error::Zero("Gauss integral with a = 0"));
            }
            (gauss_inner(p, a, b), gauss_tail(p, a, b))
        }
        Integrand::Weighted { f, a, b } => {
            let (fi, ft) = function_range(p, f)?;
            if a.is_zero() {
                (fi.min(match valuation(b, p) {
                    Valuation::Finite(vb) => vb,
                    Valuation::Infinite => fi,
                }), ft)
            } else {
                (fi.min(gauss_inner(p, a, b)), ft.min(gauss_tail(p, a, b)))
            }
        }
    };
    if inner < plan.sphere_low || tail > plan.sphere_high {
        return Err(Error::NotStabilized(alloc::format!(
            "spheres {inner}..{tail} at p = {p} fall outside the plan {}..{}",
            plan.sphere_low,
            plan.sphere_high
        )));
    }
    let ball = |j: i64| Ball::new(p, Rational::zero(), -j);
    let inner_value = ball_integral(integrand, &ball(inner), plan.max_cosets)?;
    let mut prev = inner_value.clone();
    let mut spheres = Vec::new();
    for j in inner + 1..tail {
        let cur = ball_integral(integrand, &ball(j), plan.max_cosets)?;
        spheres.push((j, (&cur - &prev).reduced()));
        prev = cur;
    }
    let check = ball_integral(integrand, &ball(tail.max(inner + 1)), plan.max_cosets)?;
    if check != prev {
        return Err(Error::NotStabilized(alloc::format!("sphere {tail} at p = {p} does not vanish")));
    }
    Ok(QpIntegral { value: prev, inner_index: inner, inner_value, tail_index: tail, spheres })
}

/// For a test function: constant on `p^{level} Z_p`, zero outside
/// `p^{radius} Z_p`.
fn function_range(p: Prime, f: &PAdicTestFunction) -> Result<(i64, i64)> {
    if f.prime() != p {
        return Err(Error::InvalidArgument(alloc::format!("function on Q_{} integrated over Q_{p}", f.prime())));
    }
    let level = f.level().unwrap_or(0);
    let radius = f.terms().iter().map(|t| t.ball().min_valuation()).min().unwrap_or(0);
    Ok((-level, -radius + 1))
}

/// `∫_{|x|_p = p^j} f(x) dx`.
pub fn sphere_integral(f: &PAdicTestFunction, j: i64) -> Cyclotomic {
    let p = f.prime();
    let outer = f.integral_over(&Ball::new(p, Rational::zero(), -j));
    let inner = f.integral_over(&Ball::new(p, Rational::zero(), 1 - j));
    (&outer - &inner).reduced()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::UnitPhase;
    use crate::qcore::ratio;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn ball_character_examples() {
        for q in [2u64, 3, 5, 7] {
            let z = Ball::unit(p(q));
            assert_eq!(integrate_ball_character(&z, &int(0), &int(0)).unwrap().value, Cyclotomic::one());
            assert_eq!(integrate_ball_character(&z, &int(0), &int(5)).unwrap().value, Cyclotomic::one());
        }
        let z3 = Ball::unit(p(3));
        assert!(integrate_ball_character(&z3, &int(0), &ratio(1, 3)).unwrap().value.is_zero());
    }

    #[test]
    fn measures_of_balls() {
        for q in [2u64, 3, 5] {
            for k in -3..=3 {
                let b = Ball::new(p(q), int(0), k);
                let v = integrate_ball_character(&b, &int(0), &int(0)).unwrap().value;
                assert_eq!(v.as_rational(), Some(p(q).rpow(-k)));
            }
        }
    }

    #[test]
    fn translation_invariance() {
        let q = p(5);
        for (c, k, bb) in [(int(3), 1, ratio(1, 25)), (ratio(2, 5), 0, ratio(7, 5)), (int(11), 2, ratio(4, 125))] {
            let shifted = integrate_ball_character(&Ball::new(q, c.clone(), k), &int(0), &bb).unwrap().value;
            let base = integrate_ball_character(&Ball::new(q, int(0), k), &int(0), &bb).unwrap().value;
            assert_eq!(shifted, base.rotate(&chi_p(&(&bb * &c), q)));
        }
    }

    #[test]
    fn additivity_over_cosets() {
        for q in [2u64, 3, 5] {
            let q = p(q);
            for (a, b) in [(ratio(1, 9), ratio(1, 3)), (ratio(3, 4), int(1)), (ratio(7, 25), ratio(2, 5))] {
                let whole = integrate_ball_character(&Ball::unit(q), &a, &b).unwrap().value;
                let mut parts = Cyclotomic::zero();
                for i in 0..q.get() as i64 {
                    parts = &parts + &integrate_ball_character(&Ball::new(q, int(i), 1), &a, &b).unwrap().value;
                }
                assert_eq!(whole, parts);
            }
        }
    }

    #[test]
    fn quadratic_gauss_sum() {
        // ∫_{Z_5} χ(x²/5) = g/5 with g = √5 for p ≡ 1 mod 4.
        let q = p(5);
        let v = integrate_ball_character(&Ball::unit(q), &ratio(1, 5), &int(0)).unwrap().value;
        assert_eq!(v, Cyclotomic::sqrt_prime(q).scale(&ratio(1, 5)));
        // p ≡ 3 mod 4: g = i√3.
        let q = p(3);
        let v = integrate_ball_character(&Ball::unit(q), &ratio(1, 3), &int(0)).unwrap().value;
        let want = Cyclotomic::sqrt_prime(q).scale(&ratio(1, 3)).rotate(&UnitPhase::from_ratio(1, 4));
        assert_eq!(v, want);
    }

    #[test]
    fn qp_examples() {
        let plan = SphereDecompositionPlan::default();
        for q in [2u64, 3, 7] {
            let om = PAdicTestFunction::omega(p(q));
            assert_eq!(integrate_qp(p(q), Integrand::Function(&om), &plan).unwrap().value, Cyclotomic::one());
            let sphere = om.sub(&PAdicTestFunction::indicator(Ball::new(p(q), int(0), 1)));
            let v = integrate_qp(p(q), Integrand::Function(&sphere), &plan).unwrap().value;
            assert_eq!(v.as_rational(), Some(int(1) - ratio(1, q as i64)));
            assert_eq!(sphere_integral(&om, 0).as_rational(), Some(int(1) - ratio(1, q as i64)));
        }
    }

    #[test]
    fn gauss_tail_is_certified() {
        let plan = SphereDecompositionPlan::default();
        for q in [2u64, 3, 5] {
            for (a, b) in [(int(1), int(0)), (ratio(3, 4), ratio(1, 2)), (int(-5), int(7)), (ratio(2, 27), ratio(3, 8))] {
                let r = integrate_qp(p(q), Integrand::Gauss { a: &a, b: &b }, &plan).unwrap();
                let sum = r.spheres.iter().fold(r.inner_value.clone(), |acc, (_, s)| &acc + s);
                assert_eq!(sum, r.value);
                // Two more spheres past the tail are still zero.
                for j in r.tail_index..r.tail_index + 2 {
                    let outer = integrate_ball_character(&Ball::new(p(q), int(0), -j), &a, &b).unwrap().value;
                    assert_eq!(outer, r.value, "p = {q}, a = {a}, b = {b}, j = {j}");
                }
            }
        }
    }

    #[test]
    fn plan_too_small_is_reported() {
        let plan = SphereDecompositionPlan { sphere_low: -1, sphere_high: 1, max_cosets: 1 << 16 };
        let a = ratio(1, 2187);
        let r = integrate_qp(p(3), Integrand::Gauss { a: &a, b: &int(0) }, &plan);
        assert!(matches!(r, Err(Error::NotStabilized(_))));
    }
}
