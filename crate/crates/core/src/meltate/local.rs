use alloc::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::bruhat::PAdicTestFunction;
use crate::cyclotomic::Cyclotomic;
use crate::integrate::sphere_integral;
use crate::qcore::{int, valuation, Prime, Rational};

/// The normalized local Mellin factor
/// `N_p(α) = (1 - p^{-α})/(1 - p^{-1}) ∫ |x|_p^{α-1} φ_p(x) dx`
/// as an exact Laurent polynomial in `u = p^{-α}`.
///
/// Each sphere `|x| = p^{-j}` contributes `u^j` times a rational multiple of
/// its measure, and below the constancy level the spheres form a geometric
/// series whose denominator `1 - u` cancels against the normalization. So no
/// poles remain and the factor is entire in `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMellinFactor {
    prime: Prime,
    coeffs: BTreeMap<i64, Cyclotomic>,
}

impl LocalMellinFactor {
    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// Coefficient of `u^j`, for the nonzero `j`.
    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &Cyclotomic)> {
        self.coeffs.iter().map(|(j, c)| (*j, c))
    }

    fn add(&mut self, j: i64, c: Cyclotomic) {
        let e = self.coeffs.entry(j).or_insert_with(Cyclotomic::zero);
        *e = (&*e + &c).reduced();
        if e.is_zero() {
            self.coeffs.remove(&j);
        }
    }

    pub fn eval(&self, alpha: Complex64) -> Complex64 {
        let ln_p = libm::log(self.prime.get() as f64);
        self.coeffs
            .iter()
            .map(|(j, c)| c.to_complex() * (-alpha * ln_p * *j as f64).exp())
            .sum()
    }
}

/// Closed-form local factor of a p-adic test function.
pub fn mellin_local(f: &PAdicTestFunction) -> LocalMellinFactor {
    let p = f.prime();
    let pr = Rational::from_integer(int(p.get() as i64).to_integer());
    let norm = &pr / (&pr - Rational::one());
    let mut out = LocalMellinFactor { prime: p, coeffs: BTreeMap::new() };
    for t in f.terms() {
        let ball = t.ball();
        let k = ball.radius_exp();
        let w = valuation(t.frequency(), p).finite().map(|v| -v);
        if !ball.contains_zero() {
            // |x| is constant on the ball
            if w.is_some_and(|w| w > k) {
                continue;
            }
            let vc = valuation(ball.center(), p).finite().expect("ball avoids 0");
            let phase = crate::characters::chi_p(&(t.frequency() * ball.center()), p);
            let c = t.coeff().rotate(&phase).scale(&(p.rpow(vc - k) * &norm));
            out.add(vc, c.clone());
            out.add(vc + 1, -&c);
            continue;
        }
        // ball p^k Z_p: spheres j ≥ max(k, w) carry (1 - 1/p) p^{-j}, and the
        // sphere j = w - 1 carries -p^{-w}, when it lies inside the ball.
        let top = w.map_or(k, |w| w.max(k));
        out.add(top, t.coeff().clone());
        if let Some(w) = w {
            if k < w {
                let c = t.coeff().scale(&(Rational::one() / (&pr - Rational::one())));
                out.add(w - 1, -&c);
                out.add(w, c);
            }
        }
    }
    out
}

/// The same factor by summing `p^{-j(α-1)} ∫_{|x|=p^{-j}} φ` over spheres
/// `j ≤ j_max`, then normalizing.
pub fn mellin_local_by_spheres(f: &PAdicTestFunction, alpha: Complex64, j_max: i64) -> Complex64 {
    let p = f.prime();
    let Some(low) = f.terms().iter().map(|t| t.ball().min_valuation()).min() else {
        return Complex64::zero();
    };
    let ln_p = libm::log(p.get() as f64);
    let mut acc = Complex64::zero();
    for j in low..=j_max {
        let s = sphere_integral(f, -j).to_complex();
        acc += s * (-(alpha - 1.0) * ln_p * j as f64).exp();
    }
    let u = (-alpha * ln_p).exp();
    acc * (Complex64::one() - u) / (1.0 - 1.0 / p.get() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruhat::{test_function, Ball};
    use crate::characters::UnitPhase;
    use crate::qcore::ratio;
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn examples() {
        for q in [2u64, 3, 5] {
            let pq = p(q);
            let u = |a: Complex64| (-a * libm::log(q as f64)).exp();
            let a = c(2.0, 0.5);
            let om = mellin_local(&PAdicTestFunction::omega(pq));
            assert_eq!(om.coeffs().count(), 1);
            assert!((om.eval(a) - 1.0).norm() < 1e-15);
            let pz = mellin_local(&PAdicTestFunction::indicator(Ball::new(pq, int(0), 1)));
            assert!((pz.eval(a) - u(a)).norm() < 1e-15);
            let one = mellin_local(&PAdicTestFunction::indicator(Ball::new(pq, int(1), 1)));
            let want = (Complex64::one() - u(a)) / (1.0 - 1.0 / q as f64) / q as f64;
            assert!((one.eval(a) - want).norm() < 1e-15);
        }
    }

    #[test]
    fn character_terms() {
        let pq = p(3);
        let f = PAdicTestFunction::zero(pq)
            .with_term(Cyclotomic::from_phase(UnitPhase::from_ratio(1, 5)), ratio(1, 9), Ball::new(pq, int(0), 0))
            .unwrap()
            .with_term(Cyclotomic::one(), ratio(2, 3), Ball::new(pq, ratio(1, 3), 1))
            .unwrap();
        for a in [c(2.0, 0.0), c(3.0, 0.0), c(2.5, -1.0)] {
            let closed = mellin_local(&f).eval(a);
            let direct = mellin_local_by_spheres(&f, a, 60);
            assert!((closed - direct).norm() < 1e-12, "α = {a}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn closed_form_matches_spheres(
            f in prop::sample::select(vec![2u64, 3, 5]).prop_flat_map(|q| test_function(p(q))),
            a in prop::sample::select(vec![2.0, 3.0]),
        ) {
            let closed = mellin_local(&f).eval(c(a, 0.0));
            let direct = mellin_local_by_spheres(&f, c(a, 0.0), 80);
            prop_assert!((closed - direct).norm() < 1e-12 * closed.norm().max(1.0), "{} vs {}", closed, direct);
        }
    }
}
