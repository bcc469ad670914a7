use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::characters::chi_p;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::qcore::{frac_part, valuation, PAdicApprox, Prime, Rational, Valuation};

/// Largest number of cosets a canonical form may enumerate.
pub const MAX_COSETS: u64 = 1 << 22;

/// The ball `center + p^k Z_p`, i.e. `{x : |x - c|_p ≤ p^{-k}}`.
///
/// The center is kept canonical: the representative of `c mod p^k Z_p` in
/// `Z[1/p] ∩ [0, p^k)`, so equal balls compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ball {
    prime: Prime,
    center: Rational,
    radius_exp: i64,
}

impl Ball {
    pub fn new(prime: Prime, center: Rational, radius_exp: i64) -> Self {
        let pk = prime.rpow(radius_exp);
        let center = frac_part(&(&center / &pk), prime) * pk;
        Ball { prime, center, radius_exp }
    }

    /// `Z_p`, the support of `Ω_p`.
    pub fn unit(prime: Prime) -> Self {
        Ball::new(prime, Rational::zero(), 0)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn center(&self) -> &Rational {
        &self.center
    }

    pub fn radius_exp(&self) -> i64 {
        self.radius_exp
    }

    pub fn contains(&self, x: &Rational) -> bool {
        valuation(&(x - &self.center), self.prime).at_least(self.radius_exp)
    }

    /// Haar measure `p^{-k}`.
    pub fn measure(&self) -> Rational {
        self.prime.rpow(-self.radius_exp)
    }

    pub fn contains_ball(&self, other: &Ball) -> bool {
        self.prime == other.prime && other.radius_exp >= self.radius_exp && self.contains(&other.center)
    }

    /// Balls are nested or disjoint, so the intersection is one of them or empty.
    pub fn intersect(&self, other: &Ball) -> Option<Ball> {
        if self.contains_ball(other) {
            Some(other.clone())
        } else if other.contains_ball(self) {
            Some(self.clone())
        } else {
            None
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.center.is_zero()
    }

    /// Smallest valuation attained on the ball.
    pub fn min_valuation(&self) -> i64 {
        match valuation(&self.center, self.prime) {
            Valuation::Finite(v) if v < self.radius_exp => v,
            _ => self.radius_exp,
        }
    }

    pub fn negate(&self) -> Ball {
        Ball::new(self.prime, -&self.center, self.radius_exp)
    }
}

/// One summand `coeff · χ_p(freq · x) · 1_ball(x)`.
///
/// The frequency only matters modulo `p^{-k} Z_p` on a ball of radius `k`;
/// it is stored reduced to `Z[1/p] ∩ [0, p^{-k})` with the discarded part
/// folded into the coefficient as the constant phase `χ_p(δ c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    coeff: Cyclotomic,
    frequency: Rational,
    ball: Ball,
}

impl Term {
    pub fn new(coeff: Cyclotomic, frequency: Rational, ball: Ball) -> Self {
        let p = ball.prime;
        let k = ball.radius_exp;
        let reduced = frac_part(&(&frequency * p.rpow(k)), p) * p.rpow(-k);
        let shift = &frequency - &reduced;
        let coeff = if shift.is_zero() { coeff } else { coeff.rotate(&chi_p(&(shift * &ball.center), p)) };
        Term { coeff, frequency: reduced, ball }
    }

    pub fn coeff(&self) -> &Cyclotomic {
        &self.coeff
    }

    pub fn frequency(&self) -> &Rational {
        &self.frequency
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    /// Level `m` such that the term is constant on cosets of `p^m Z_p`.
    pub fn level(&self) -> i64 {
        let w = match valuation(&self.frequency, self.ball.prime) {
            Valuation::Finite(v) => -v,
            Valuation::Infinite => i64::MIN,
        };
        self.ball.radius_exp.max(w)
    }

    pub fn evaluate(&self, x: &Rational) -> Cyclotomic {
        if self.ball.contains(x) {
            self.coeff.rotate(&chi_p(&(&self.frequency * x), self.ball.prime))
        } else {
            Cyclotomic::zero()
        }
    }

    /// `∫_{ball} coeff χ_p(ωx) dx = coeff · p^{-k} χ_p(ωc) [|ω|_p ≤ p^k]`.
    pub fn integral(&self) -> Cyclotomic {
        let p = self.ball.prime;
        if !valuation(&self.frequency, p).at_least(-self.ball.radius_exp) {
            return Cyclotomic::zero();
        }
        self.coeff.rotate(&chi_p(&(&self.frequency * &self.ball.center), p)).scale(&self.ball.measure())
    }

    /// Exact transform `ξ ↦ ∫ coeff χ(ωx) 1_B(x) χ(ξx) dx`, again a single term.
    pub fn fourier(&self) -> Term {
        let p = self.ball.prime;
        let c = &self.ball.center;
        let coeff = self.coeff.rotate(&chi_p(&(&self.frequency * c), p)).scale(&self.ball.measure());
        Term::new(coeff, c.clone(), Ball::new(p, -&self.frequency, -self.ball.radius_exp))
    }
}

/// A locally constant, compactly supported function on `Q_p`, as a finite
/// sum of character-modulated ball indicators.
#[derive(Debug, Clone)]
pub struct PAdicTestFunction {
    prime: Prime,
    terms: Vec<Term>,
}

impl PAdicTestFunction {
    pub fn zero(prime: Prime) -> Self {
        PAdicTestFunction { prime, terms: Vec::new() }
    }

    pub fn indicator(ball: Ball) -> Self {
        let prime = ball.prime;
        PAdicTestFunction { prime, terms: alloc::vec![Term::new(Cyclotomic::one(), Rational::zero(), ball)] }
    }

    /// `Ω_p(|x|_p)`.
    pub fn omega(prime: Prime) -> Self {
        PAdicTestFunction::indicator(Ball::unit(prime))
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn push(&mut self, term: Term) -> Result<()> {
        if term.ball.prime != self.prime {
            return Err(Error::InvalidArgument(alloc::format!(
                "ball at {} added to a function on Q_{}",
                term.ball.prime,
                self.prime
            )));
        }
        if !term.coeff.is_zero() {
            self.terms.push(term);
        }
        Ok(())
    }

    pub fn with_term(mut self, coeff: Cyclotomic, frequency: Rational, ball: Ball) -> Result<Self> {
        self.push(Term::new(coeff, frequency, ball))?;
        Ok(self)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common constancy level of all terms; `None` for the empty sum.
    pub fn level(&self) -> Option<i64> {
        self.terms.iter().map(Term::level).max()
    }

    /// Smallest radius exponent, i.e. the largest ball in the support.
    pub fn support_radius(&self) -> Option<i64> {
        self.terms.iter().map(|t| t.ball.radius_exp).min()
    }

    pub fn evaluate(&self, x: &Rational) -> Cyclotomic {
        let mut acc = Cyclotomic::zero();
        for t in &self.terms {
            acc = &acc + &t.evaluate(x);
        }
        acc
    }

    /// Evaluation at a point known modulo `p^N`; fails unless `N` reaches the
    /// constancy level.
    pub fn evaluate_approx(&self, x: &PAdicApprox) -> Result<Cyclotomic> {
        assert_eq!(x.prime(), self.prime, "point and function live at different primes");
        if let Some(m) = self.level() {
            if x.precision() < m {
                return Err(Error::Precision { needed: m, available: x.precision() });
            }
        }
        Ok(self.evaluate(x.approximant()))
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { coeff: &t.coeff * c, frequency: t.frequency.clone(), ball: t.ball.clone() })
            .filter(|t| !t.coeff.is_zero())
            .collect();
        PAdicTestFunction { prime: self.prime, terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime, "sum of functions at different primes");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        PAdicTestFunction { prime: self.prime, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Cyclotomic::from_rational(-Rational::one())))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime, "product of functions at different primes");
        let mut terms = Vec::new();
        for s in &self.terms {
            for t in &other.terms {
                if let Some(ball) = s.ball.intersect(&t.ball) {
                    let term = Term::new(&s.coeff * &t.coeff, &s.frequency + &t.frequency, ball);
                    if !term.coeff.is_zero() {
                        terms.push(term);
                    }
                }
            }
        }
        PAdicTestFunction { prime: self.prime, terms }
    }

    pub fn conj(&self) -> Self {
        let terms = self.terms.iter().map(|t| Term::new(t.coeff.conj(), -&t.frequency, t.ball.clone())).collect();
        PAdicTestFunction { prime: self.prime, terms }
    }

    /// `x ↦ f(-x)`.
    pub fn reflect(&self) -> Self {
        let terms = self.terms.iter().map(|t| Term::new(t.coeff.clone(), -&t.frequency, t.ball.negate())).collect();
        PAdicTestFunction { prime: self.prime, terms }
    }

    /// `x ↦ f(x + s)`.
    pub fn translate(&self, s: &Rational) -> Self {
        let p = self.prime;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let coeff = t.coeff.rotate(&chi_p(&(&t.frequency * s), p));
                Term::new(coeff, t.frequency.clone(), Ball::new(p, &t.ball.center - s, t.ball.radius_exp))
            })
            .collect();
        PAdicTestFunction { prime: self.prime, terms }
    }

    /// `∫_{Q_p} f(x) dx` with `∫_{Z_p} dx = 1`.
    pub fn integral(&self) -> Cyclotomic {
        let mut acc = Cyclotomic::zero();
        for t in &self.terms {
            acc = &acc + &t.integral();
        }
        acc
    }

    /// `∫_{ball} f(x) dx`.
    pub fn integral_over(&self, ball: &Ball) -> Cyclotomic {
        self.mul(&PAdicTestFunction::indicator(ball.clone())).integral()
    }

    /// `f̃(ξ) = ∫ f(x) χ_p(ξx) dx`, exactly.
    pub fn fourier(&self) -> Self {
        PAdicTestFunction { prime: self.prime, terms: self.terms.iter().map(Term::fourier).collect() }
    }

    /// Values on the cosets of `p^m Z_p` meeting the support.
    pub fn step(&self, level: i64) -> Result<StepFunction> {
        let p = self.prime;
        let mut values: BTreeMap<Rational, Cyclotomic> = BTreeMap::new();
        let mut budget = MAX_COSETS;
        for t in &self.terms {
            let k = t.ball.radius_exp;
            if level < t.level() {
                return Err(Error::InvalidArgument(alloc::format!(
                    "level {level} is below the constancy level {}",
                    t.level()
                )));
            }
            let count = p.get().checked_pow((level - k) as u32).filter(|&c| c <= budget).ok_or_else(|| {
                Error::NotStabilized(alloc::format!("more than {MAX_COSETS} cosets at level {level}"))
            })?;
            budget -= count;
            let pk = p.rpow(k);
            for i in 0..count {
                let x = &t.ball.center + &pk * Rational::from_integer(BigInt::from(i));
                let key = Ball::new(p, x, level).center;
                let v = t.coeff.rotate(&chi_p(&(&t.frequency * &key), p));
                let e = values.entry(key).or_insert_with(Cyclotomic::zero);
                *e = &*e + &v;
            }
        }
        let values: BTreeMap<Rational, Cyclotomic> =
            values.into_iter().map(|(k, v)| (k, v.reduced())).filter(|(_, v)| !v.is_zero()).collect();
        Ok(StepFunction { prime: p, level, values })
    }

    /// Canonical form: disjoint balls at the common constancy level.
    pub fn canonical(&self) -> Result<StepFunction> {
        self.step(self.level().unwrap_or(0))
    }

    /// Exact equality as functions.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        if self.prime != other.prime {
            return Ok(false);
        }
        Ok(self.sub(other).canonical()?.is_zero())
    }

    /// `∫ |f|² dx`, exactly.
    pub fn l2_norm_sq(&self) -> Result<Cyclotomic> {
        let s = self.canonical()?;
        let cell = self.prime.rpow(-s.level);
        let mut acc = Cyclotomic::zero();
        for v in s.values.values() {
            acc = &acc + &(v * &v.conj()).scale(&cell);
        }
        Ok(acc.reduced())
    }
}

/// A function constant on the cosets of `p^level Z_p`, stored by canonical
/// coset representative with nonzero reduced values.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    prime: Prime,
    level: i64,
    values: BTreeMap<Rational, Cyclotomic>,
}

impl StepFunction {
    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn values(&self) -> &BTreeMap<Rational, Cyclotomic> {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_test_function(&self) -> PAdicTestFunction {
        let terms = self
            .values
            .iter()
            .map(|(c, v)| Term::new(v.clone(), Rational::zero(), Ball::new(self.prime, c.clone(), self.level)))
            .collect();
        PAdicTestFunction { prime: self.prime, terms }
    }
}

/// `Ω(|x|)` for a norm value: 1 on the unit ball, 0 outside.
pub fn omega(norm: &Rational) -> Result<u8> {
    if norm < &Rational::zero() {
        return Err(Error::InvalidArgument("a norm cannot be negative".into()));
    }
    Ok(u8::from(norm <= &Rational::one()))
}

/// Number of cosets of `p^m Z_p` in a ball of radius `k`, if it is small.
pub(crate) fn coset_count(p: Prime, k: i64, m: i64) -> Option<u64> {
    if m < k {
        return Some(1);
    }
    p.get().checked_pow(u32::try_from(m - k).ok()?).filter(|&c| c <= MAX_COSETS)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::characters::UnitPhase;
    use crate::qcore::{int, ratio};
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(&ratio(1, 2)).unwrap(), 1);
        assert_eq!(omega(&int(1)).unwrap(), 1);
        assert_eq!(omega(&int(3)).unwrap(), 0);
        assert!(omega(&int(-1)).is_err());
    }

    #[test]
    fn balls_are_nested_or_disjoint() {
        let q = p(3);
        let a = Ball::new(q, ratio(1, 3), 0);
        let b = Ball::new(q, ratio(10, 3), 1);
        let c = Ball::new(q, int(2), 0);
        assert!(a.contains_ball(&b));
        assert_eq!(a.intersect(&c), None);
        assert_eq!(Ball::new(q, int(7), 1), Ball::new(q, int(1), 1));
        assert_eq!(Ball::new(q, ratio(1, 2), 0), Ball::new(q, int(2), 0));
    }

    #[test]
    fn omega_is_self_dual() {
        for q in [2u64, 3, 5, 7, 11] {
            let om = PAdicTestFunction::omega(p(q));
            assert!(om.fourier().equals(&om).unwrap());
        }
    }

    #[test]
    fn transform_of_small_ball() {
        // 1_{pZ_p} ↦ p^{-1} 1_{p^{-1}Z_p}
        for q in [2u64, 3, 5] {
            let f = PAdicTestFunction::indicator(Ball::new(p(q), int(0), 1));
            let want = PAdicTestFunction::indicator(Ball::new(p(q), int(0), -1))
                .scale(&Cyclotomic::from_rational(ratio(1, q as i64)));
            assert!(f.fourier().equals(&want).unwrap());
        }
    }

    // Residue-sum oracle: for f constant at level m with support in p^{-R}Z_p,
    // f̃(ξ) = p^{-m} Σ_{x} f(x) χ(ξx) over coset representatives.
    fn brute_fourier(f: &PAdicTestFunction, xi: &Rational) -> Cyclotomic {
        let xi_level = valuation(xi, f.prime()).finite().map_or(0, |v| -v);
        let s = f.step(f.level().unwrap().max(xi_level)).unwrap();
        let cell = f.prime().rpow(-s.level());
        let mut acc = Cyclotomic::zero();
        for (x, v) in s.values() {
            acc = &acc + &v.rotate(&chi_p(&(xi * x), f.prime())).scale(&cell);
        }
        acc
    }

    #[test]
    fn transform_matches_residue_sums() {
        let q = p(3);
        let f = PAdicTestFunction::zero(q)
            .with_term(Cyclotomic::from_rational(int(2)), ratio(1, 9), Ball::new(q, ratio(1, 3), 0))
            .unwrap()
            .with_term(Cyclotomic::one(), int(0), Ball::new(q, int(0), 2))
            .unwrap();
        let ft = f.fourier();
        for xi in [int(0), int(1), ratio(1, 3), ratio(2, 9), ratio(5, 27), int(7)] {
            assert_eq!(ft.evaluate(&xi), brute_fourier(&f, &xi), "ξ = {xi}");
        }
    }

    #[test]
    fn evaluate_with_precision() {
        let q = p(5);
        let f = PAdicTestFunction::indicator(Ball::new(q, int(1), 2));
        assert!(f.evaluate_approx(&PAdicApprox::new(q, int(26), 1)).is_err());
        assert_eq!(f.evaluate_approx(&PAdicApprox::new(q, int(26), 2)).unwrap(), Cyclotomic::one());
    }

    pub(crate) fn test_function(q: Prime) -> impl Strategy<Value = PAdicTestFunction> {
        let term = (-3i64..4, -20i64..20, 0i64..3, -2i64..3, 0i64..4, 0u8..2);
        prop::collection::vec(term, 1..4).prop_map(move |ts| {
            let mut f = PAdicTestFunction::zero(q);
            for (c, num, den_exp, k, fnum, fexp) in ts {
                let center = Rational::new(num.into(), BigInt::from(q.get()).pow(den_exp as u32));
                let freq = Rational::new(fnum.into(), BigInt::from(q.get()).pow(fexp as u32));
                let coeff = Cyclotomic::from_rational(int(c)).rotate(&UnitPhase::from_ratio(fnum, 4));
                f.push(Term::new(coeff, freq, Ball::new(q, center, k))).unwrap();
            }
            f
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn involution_is_reflection(
            f in prop::sample::select(vec![2u64, 3, 5]).prop_flat_map(|q| test_function(p(q)))
        ) {
            prop_assert!(f.fourier().fourier().equals(&f.reflect()).unwrap());
        }

        #[test]
        fn plancherel(f in prop::sample::select(vec![2u64, 3]).prop_flat_map(|q| test_function(p(q)))) {
            prop_assert_eq!(f.l2_norm_sq().unwrap(), f.fourier().l2_norm_sq().unwrap());
        }

        #[test]
        fn linearity(f in test_function(p(3)), g in test_function(p(3)), c in -4i64..5) {
            let c = Cyclotomic::from_rational(int(c));
            let lhs = f.scale(&c).add(&g).fourier();
            let rhs = f.fourier().scale(&c).add(&g.fourier());
            prop_assert!(lhs.equals(&rhs).unwrap());
        }

        #[test]
        fn additivity_over_cosets(f in test_function(p(3))) {
            let q = p(3);
            let whole = f.integral_over(&Ball::unit(q));
            let parts = (0..3).fold(Cyclotomic::zero(), |acc, i| &acc + &f.integral_over(&Ball::new(q, int(i), 1)));
            prop_assert_eq!(whole, parts);
        }
    }
}
