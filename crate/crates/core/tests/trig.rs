//! p-adic sine and cosine: identities to twelve digits.

use adelic_core::oscillator::{padic_cos, padic_sin, padic_tan, trig_domain};
use adelic_core::qcore::{int, ratio, valuation, PAdicApprox, Prime, Rational};
use num_traits::One;

const DIGITS: i64 = 12;

fn vanishes_mod(d: &Rational, p: Prime, n: i64) -> bool {
    valuation(d, p).finite().is_none_or(|v| v >= n)
}

fn cases() -> Vec<(Prime, Rational)> {
    let mut out = Vec::new();
    for q in [2u64, 3, 5, 7, 11] {
        let p = Prime::new(q).unwrap();
        let pv = int(q as i64).pow(trig_domain(p) as i32);
        for u in [int(1), int(-2), ratio(3, 5), ratio(1, 13), int(q as i64 + 1), ratio(-7, 9)] {
            if valuation(&u, p).finite() == Some(0) {
                out.push((p, &pv * u));
            }
        }
    }
    out
}

#[test]
fn pythagoras_and_double_angle() {
    for (p, t) in cases() {
        let x = PAdicApprox::new(p, t.clone(), DIGITS);
        let s = padic_sin(&x).unwrap().value.approximant().clone();
        let c = padic_cos(&x).unwrap().value.approximant().clone();
        let s2 = padic_sin(&PAdicApprox::new(p, &t * int(2), DIGITS)).unwrap().value.approximant().clone();
        let c2 = padic_cos(&PAdicApprox::new(p, &t * int(2), DIGITS)).unwrap().value.approximant().clone();
        assert!(vanishes_mod(&(&s * &s + &c * &c - Rational::one()), p, DIGITS), "p = {p}, t = {t}");
        assert!(vanishes_mod(&(&s2 - int(2) * &s * &c), p, DIGITS), "p = {p}, t = {t}");
        assert!(vanishes_mod(&(&c2 - (&c * &c - &s * &s)), p, DIGITS), "p = {p}, t = {t}");
        let tan = padic_tan(&x).unwrap().value.approximant().clone();
        assert!(vanishes_mod(&(&tan * &c - &s), p, DIGITS), "p = {p}, t = {t}");
    }
}

#[test]
fn small_argument_behaviour() {
    for (p, t) in cases() {
        let x = PAdicApprox::new(p, t.clone(), DIGITS);
        let s = padic_sin(&x).unwrap().value.approximant().clone();
        // sin t = t - t³/6 + ..., so sin t - t has valuation ≥ 3v(t) - v(6)
        let v = valuation(&t, p).finite().unwrap();
        let bound = (3 * v - valuation(&int(6), p).finite().unwrap()).min(DIGITS);
        assert!(vanishes_mod(&(&s - &t), p, bound), "p = {p}, t = {t}");
    }
}

#[test]
fn outside_the_domain_is_an_error() {
    let p3 = Prime::new(3).unwrap();
    assert!(padic_sin(&PAdicApprox::new(p3, int(1), DIGITS)).is_err());
    let p2 = Prime::new(2).unwrap();
    assert!(padic_cos(&PAdicApprox::new(p2, int(2), DIGITS)).is_err());
}
