//! Tate's formula for explicit test functions and the Euler product of ζ.

use adelic_core::bruhat::{vacuum, Ball, ElementaryFunction, PAdicTestFunction, RealTestFunction, Term};
use adelic_core::characters::UnitPhase;
use adelic_core::cyclotomic::Cyclotomic;
use adelic_core::meltate::{euler_product, functional_equation_residual, tate_check, zeta};
use adelic_core::qcore::{int, ratio, Prime};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sample_functions() -> Vec<ElementaryFunction> {
    let p3 = Prime::new(3).unwrap();
    let mut local = PAdicTestFunction::zero(p3);
    local.push(Term::new(Cyclotomic::term(int(2), UnitPhase::new(ratio(1, 4))), int(0), Ball::new(p3, ratio(1, 3), 0))).unwrap();
    local.push(Term::new(Cyclotomic::term(int(-1), UnitPhase::new(int(0))), ratio(1, 9), Ball::new(p3, int(0), 1))).unwrap();
    let hermite = RealTestFunction::Hermite(vec![(c(1.0, 0.0), 0), (c(0.5, -0.25), 2), (c(0.0, 1.0), 4)]);
    vec![vacuum(), ElementaryFunction::new(hermite.clone()), ElementaryFunction::new(hermite).with_local(local)]
}

#[test]
fn tate_formula_in_the_strip() {
    for f in sample_functions() {
        for alpha in [c(0.5, 0.0), c(0.3, 2.0), c(0.75, -7.5), c(0.1, 14.0)] {
            let gap = tate_check(&f, alpha).unwrap();
            assert!(gap < 1e-6, "α = {alpha}: {gap}");
        }
    }
    assert!(tate_check(&vacuum(), c(1.5, 0.0)).is_err());
}

#[test]
fn completed_zeta_is_symmetric() {
    for alpha in [c(0.4, 0.0), c(0.5, 14.134725), c(0.2, -30.0), c(0.9, 3.0)] {
        assert!(functional_equation_residual(alpha).unwrap() < 1e-10, "α = {alpha}");
    }
}

#[test]
fn euler_product_far_right() {
    for s in [c(3.0, 0.0), c(3.0, 5.0), c(4.5, -2.0)] {
        let gap = (euler_product(s, 10_000) - zeta(s).unwrap()).norm();
        assert!(gap < 1e-8, "s = {s}: {gap}");
    }
}

/// At `s = 2` the primes past the bound contribute `ζ(2) Σ_{p > N} p^{-2}`
/// to first order, about `1e-5` for `N = 10⁴`; the gap must match that
/// tail, not vanish.
#[test]
fn euler_product_at_two_has_a_prime_tail() {
    let s = c(2.0, 0.0);
    let truncated = euler_product(s, 10_000);
    let z = zeta(s).unwrap();
    let mut sieve = vec![true; 1_000_001];
    let mut tail = 0.0;
    for n in 2..sieve.len() {
        if sieve[n] {
            if n > 10_000 {
                tail += 1.0 / (n as f64 * n as f64);
            }
            for m in (n * n..sieve.len()).step_by(n) {
                sieve[m] = false;
            }
        }
    }
    // primes past 10⁶ add about 7e-8 more
    let predicted = z.re * tail;
    let gap = (z - truncated).norm();
    assert!(gap > 1e-8);
    assert!((gap - predicted).abs() / predicted < 0.02, "gap {gap}, predicted {predicted}");
}

/// The `1e-8` bound on the whole half-plane `Re s ≥ 2` fails at its edge:
/// the omitted primes contribute about `1.6e-5` at `s = 2`. Kept so the
/// shortfall stays visible; run with `--ignored`.
#[test]
#[ignore = "the prime tail past 10^4 is about 1.6e-5 at s = 2"]
fn euler_product_at_two_within_1e8() {
    let s = c(2.0, 0.0);
    let gap = (euler_product(s, 10_000) - zeta(s).unwrap()).norm();
    assert!(gap < 1e-8, "gap {gap}");
}
