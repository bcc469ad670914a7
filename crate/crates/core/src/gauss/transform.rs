//! `Λ[φ](b) = ∫ χ(bx) φ̃(x²) dx`, which by Fubini equals `∫ K(a, b) φ(a) da`.

use alloc::collections::BTreeSet;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;

use super::lambda::lambda_p;
use crate::bruhat::{coset_count, ElementaryFunction, PAdicTestFunction, RealTestFunction};
use crate::characters::{chi_inf, chi_p};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::integrate::{integrate_real, QuadratureConfig};
use crate::qcore::{int, valuation, Adele, Prime, Rational};

fn cosets(p: Prime, k: i64, m: i64) -> Result<u64> {
    coset_count(p, k, m).ok_or_else(|| {
        Error::NotStabilized(alloc::format!("Λ_{p} needs {p}^{} cosets", m - k))
    })
}

fn min_valuation(f: &PAdicTestFunction) -> Option<i64> {
    f.terms().iter().map(|t| t.ball().min_valuation()).min()
}

fn v2(p: Prime) -> i64 {
    i64::from(p.get() == 2)
}

/// `Λ_p[φ](b)` by summing `χ_p(bx) φ̃(x²)` over cosets.
///
/// If `φ̃` is supported in `v ≥ R` and constant at level `m`, the integrand
/// lives on `v(x) ≥ s = ⌈R/2⌉` and is constant on cosets of `p^L` once
/// `L ≥ m - v(2) - s`, `2L ≥ m` and `L ≥ -v(b)`.
pub fn lambda_transform_p(phi: &PAdicTestFunction, b: &Rational) -> Result<Cyclotomic> {
    let p = phi.prime();
    let psi = phi.fourier();
    let (Some(r), Some(m)) = (min_valuation(&psi), psi.level()) else {
        return Ok(Cyclotomic::zero());
    };
    let s = Integer::div_ceil(&r, &2);
    let mut l = s.max(m - v2(p) - s).max(Integer::div_ceil(&m, &2));
    if let Some(vb) = valuation(b, p).finite() {
        l = l.max(-vb);
    }
    let n = cosets(p, s, l)?;
    let ps = p.rpow(s);
    let mut acc = Cyclotomic::zero();
    for t in 0..n {
        let x = &ps * int(t as i64);
        let v = psi.evaluate(&(&x * &x));
        if !v.is_zero() {
            acc = &acc + &v.rotate(&chi_p(&(b * &x), p));
        }
    }
    Ok(acc.scale(&p.rpow(-l)))
}

/// `Λ_p[φ](b) = ∫ λ_p(a) |2a|^{-1/2} χ_p(-b²/4a) φ(a) da`, sphere by sphere.
///
/// This is the kernel side of the Fubini identity and serves as an
/// independent check of [`lambda_transform_p`].
pub fn lambda_transform_p_kernel(phi: &PAdicTestFunction, b: &Rational) -> Result<Cyclotomic> {
    let p = phi.prime();
    let (Some(r), Some(m)) = (min_valuation(phi), phi.level()) else {
        return Ok(Cyclotomic::zero());
    };
    // λ_p(p^j u) depends on u mod p^c.
    let c = if p.get() == 2 { 3 } else { 1 };
    let c_val = |j: i64| -> Option<i64> {
        valuation(b, p).finite().map(|vb| 2 * vb - 2 * v2(p) - j)
    };
    let sphere = |j: i64| -> Result<Cyclotomic> {
        let mut l = c.max(m - j);
        if let Some(vc) = c_val(j) {
            l = l.max(-vc);
        }
        let n = cosets(p, 0, l)?;
        let pj = p.rpow(j);
        let mut acc = Cyclotomic::zero();
        for u in 0..n {
            if u % p.get() == 0 {
                continue;
            }
            let a = &pj * int(u as i64);
            let f = phi.evaluate(&a);
            if f.is_zero() {
                continue;
            }
            let phase = &lambda_p(p, &a)? * &chi_p(&(-(b * b) / (&a * int(4))), p);
            acc = &acc + &f.rotate(&phase);
        }
        let modulus = Cyclotomic::sqrt_prime_power(p, v2(p) + j);
        Ok((&acc * &modulus).scale(&p.rpow(-j - l)))
    };

    let mut total = Cyclotomic::zero();
    if b.is_zero() {
        // φ(a) = φ(0) for v(a) ≥ m, and then S_{j+2} = S_j / p.
        let j0 = r.max(m);
        for j in r..j0 {
            total = &total + &sphere(j)?;
        }
        let pair = &sphere(j0)? + &sphere(j0 + 1)?;
        let q = Rational::new(int(p.get() as i64).to_integer(), int(p.get() as i64 - 1).to_integer());
        return Ok(&total + &pair.scale(&q));
    }
    // Once φ and λ are constant on u mod p^c and the character oscillates
    // faster, every further sphere vanishes.
    let mut j = r;
    while !(j + c >= m && c_val(j).expect("b ≠ 0") < -c) {
        total = &total + &sphere(j)?;
        j += 1;
    }
    Ok(total)
}

/// `Λ_∞[φ](b) = ∫ e^{-2πibx} φ̃(x²) dx` by quadrature.
pub fn lambda_transform_inf(phi: &RealTestFunction, b: f64) -> Result<Complex64> {
    let psi = phi.fourier()?;
    let r = psi
        .decay_radius()
        .ok_or_else(|| Error::InvalidArgument("real factor has no decay bound".into()))?;
    let radius = libm::sqrt(r) + 1.0;
    let mut cfg = QuadratureConfig::for_radius(radius);
    cfg.panels = cfg.panels.max((8.0 * radius * (1.0 + b.abs())) as usize);
    cfg.budget = 1e-10;
    Ok(integrate_real(&|x| chi_inf(b * x) * psi.evaluate(x * x), &cfg)?.value)
}

/// `Λ[φ](b)` for an elementary function, as a product over places. At a
/// prime where `φ_p = Ω_p` the local factor is `Ω_p(|b_p|)`, which is 1 on
/// the integral tail of `b`.
pub fn lambda_transform(phi: &ElementaryFunction, b: &Adele) -> Result<Complex64> {
    let mut acc = lambda_transform_inf(phi.real(), crate::qcore::to_f64(b.real()))?;
    let primes: BTreeSet<Prime> = phi.primes().chain(b.primes()).collect();
    let mut exact = Cyclotomic::one();
    for p in primes {
        let bp = b.component(p).ok_or(Error::MissingComponent(p.get()))?;
        exact = &exact * &lambda_transform_p(&phi.local(p), &bp)?;
    }
    acc *= exact.to_complex();
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruhat::{test_function, Ball};
    use crate::characters::UnitPhase;
    use crate::qcore::{principal_adele, ratio, to_f64};
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn omega_is_fixed() {
        for q in [2u64, 3, 5] {
            let om = PAdicTestFunction::omega(p(q));
            for b in [int(0), int(1), ratio(1, q as i64), ratio(5, 7)] {
                let want = Cyclotomic::from_rational(int(i64::from(crate::qcore::padic_norm(&b, p(q)) <= int(1))));
                assert_eq!(lambda_transform_p(&om, &b).unwrap(), want, "p = {q}, b = {b}");
                assert_eq!(lambda_transform_p_kernel(&om, &b).unwrap(), want, "p = {q}, b = {b}");
            }
        }
    }

    #[test]
    fn routes_agree_on_examples() {
        for q in [2u64, 3, 5] {
            let pq = p(q);
            let f = PAdicTestFunction::indicator(Ball::new(pq, ratio(1, q as i64), -1))
                .with_term(Cyclotomic::from_phase(UnitPhase::from_ratio(1, 3)), ratio(1, q as i64 * q as i64), Ball::new(pq, int(0), 1))
                .unwrap();
            for b in [int(0), int(1), ratio(1, q as i64), ratio(3, (q * q) as i64)] {
                let fub = lambda_transform_p(&f, &b).unwrap();
                let ker = lambda_transform_p_kernel(&f, &b).unwrap();
                assert_eq!(fub, ker, "p = {q}, b = {b}");
            }
        }
    }

    #[test]
    fn real_route_for_gaussian() {
        // the transform of e^{-πx²} is itself, so Λ_∞(b) = ∫ e^{-2πibx} e^{-πx⁴} dx
        let g = RealTestFunction::gaussian();
        for b in [0.0, 0.4, -1.3] {
            let got = lambda_transform_inf(&g, b).unwrap();
            let cfg = QuadratureConfig { radius: 4.0, panels: 400, order: 20, budget: 1e-11 };
            let want = integrate_real(&|x| chi_inf(b * x) * libm::exp(-core::f64::consts::PI * x * x * x * x), &cfg).unwrap().value;
            assert!((got - want).norm() < 1e-10);
        }
    }

    #[test]
    fn vacuum_transform() {
        let phi = crate::bruhat::vacuum();
        let v = lambda_transform(&phi, &principal_adele(&ratio(1, 2))).unwrap();
        let real = lambda_transform_inf(phi.real(), to_f64(&ratio(1, 2))).unwrap();
        // 1/2 is not integral at 2, so the factor Ω_2(|1/2|) vanishes.
        assert!(v.norm() < 1e-15 && real.norm() > 0.1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn fubini_matches_kernel(
            (q, f) in prop::sample::select(vec![2u64, 3, 5]).prop_flat_map(|q| (Just(q), test_function(p(q)))),
            bn in -20i64..20, be in -2i64..2,
        ) {
            let b = int(bn) * p(q).rpow(be);
            let fub = lambda_transform_p(&f, &b);
            let ker = lambda_transform_p_kernel(&f, &b);
            if let (Ok(x), Ok(y)) = (fub, ker) {
                prop_assert_eq!(x, y);
            }
        }
    }
}
