//! Riemann zeta and Euler gamma for complex arguments, in `f64`.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Terms of the Borwein acceleration; the error decays like `5.83^{-n}`
/// times `e^{π|Im s|/2}`, which leaves ample room up to `|Im s| ≈ 40`.
const ETA_TERMS: usize = 64;

/// Dirichlet eta function `η(s) = Σ_{n≥1} (-1)^{n-1} n^{-s}` for `Re s > 0`,
/// by Borwein's accelerated alternating series.
#[allow(clippy::needless_range_loop)]
pub fn eta(s: Complex64) -> Result<Complex64> {
    if !(s.re > 0.0) {
        return Err(Error::Domain(alloc::format!("η({s})"), "needs Re s > 0"));
    }
    let n = ETA_TERMS;
    // d_k = n Σ_{i≤k} (n+i-1)! 4^i / ((n-i)! (2i)!), normalized by d_n.
    let mut d = [0.0f64; ETA_TERMS + 1];
    let mut term = 1.0 / n as f64;
    let mut acc = term;
    d[0] = n as f64 * acc;
    for i in 1..=n {
        let fi = i as f64;
        term *= 4.0 * (n as f64 + fi - 1.0) * (n as f64 - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0));
        acc += term;
        d[i] = n as f64 * acc;
    }
    let dn = d[n];
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let w = sign * (d[k] - dn) / dn;
        sum += Complex64::new((k + 1) as f64, 0.0).powc(-s) * w;
    }
    Ok(-sum)
}

/// `ζ(s) = η(s) / (1 - 2^{1-s})` for `Re s > 0`, `s ≠ 1`.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("ζ has a pole at s = 1".into()));
    }
    let e = eta(s)?;
    let denom = Complex64::new(1.0, 0.0) - Complex64::new(2.0, 0.0).powc(Complex64::new(1.0, 0.0) - s);
    if denom.norm() < 1e-12 {
        return Err(Error::Domain(alloc::format!("ζ({s})"), "2^{1-s} = 1 makes the eta quotient singular"));
    }
    Ok(e / denom)
}

/// `∏_{p ≤ bound} (1 - p^{-s})^{-1}`.
pub fn euler_product(s: Complex64, bound: u64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    primes_up_to(bound)
        .into_iter()
        .fold(one, |acc, p| acc / (one - Complex64::new(p as f64, 0.0).powc(-s)))
}

fn primes_up_to(bound: u64) -> alloc::vec::Vec<u64> {
    let n = bound as usize;
    let mut sieve = alloc::vec![true; n + 1];
    let mut out = alloc::vec::Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

const LANCZOS_G: f64 = 5.242_187_5;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

/// `ln Γ(z)` for `Re z ≥ 1/2` (Lanczos, principal branch of each factor).
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let mut ser = Complex64::new(LANCZOS[0], 0.0);
    for (j, c) in LANCZOS.iter().enumerate().skip(1) {
        ser += *c / (z + j as f64);
    }
    let t = z + LANCZOS_G;
    (z + 0.5) * t.ln() - t + (ser * 2.506_628_274_631_000_5 / z).ln()
}

/// Euler gamma for complex arguments, with reflection for `Re z < 1/2`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == libm::round(z.re) {
        return Err(Error::Pole(alloc::format!("Γ has a pole at {}", z.re)));
    }
    if z.re < 0.5 {
        // Γ(z) Γ(1-z) = π / sin(πz)
        let s = (z * PI).sin();
        let g = ln_gamma_right(Complex64::new(1.0, 0.0) - z).exp();
        return Ok(Complex64::new(PI, 0.0) / (s * g));
    }
    Ok(ln_gamma_right(z).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    /// Stirling series for `ln Γ(z + 20)` followed by downward recurrence.
    fn gamma_oracle(z: Complex64) -> Complex64 {
        let shift = 20;
        let w = z + shift as f64;
        let b = [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0];
        let mut lg = (w - 0.5) * w.ln() - w + 0.5 * libm::log(2.0 * PI);
        for (k, bk) in b.iter().enumerate() {
            lg += *bk / w.powi(2 * k as i32 + 1);
        }
        let mut g = lg.exp();
        for k in 0..shift {
            g /= z + k as f64;
        }
        g
    }

    /// `ζ(s) = Σ_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2 + Euler-Maclaurin corrections`.
    fn zeta_oracle(s: Complex64) -> Complex64 {
        let n = 40.0;
        let mut sum = c(0.0, 0.0);
        for k in 1..40 {
            sum += c(k as f64, 0.0).powc(-s);
        }
        let nn = c(n, 0.0);
        sum += nn.powc(c(1.0, 0.0) - s) / (s - 1.0) + nn.powc(-s) * 0.5;
        // B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
        let b = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0];
        let mut rising = s;
        let mut fact = 2.0;
        for (k, bk) in b.iter().enumerate() {
            let m = 2 * k + 2;
            if k > 0 {
                rising = rising * (s + (m - 3) as f64) * (s + (m - 2) as f64);
                fact *= ((m - 1) * m) as f64;
            }
            sum += rising * (*bk / fact) * nn.powc(-s - (m - 1) as f64);
        }
        sum
    }

    #[test]
    fn gamma_values() {
        assert!(rel(gamma(c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-14);
        assert!(rel(gamma(c(0.5, 0.0)).unwrap(), c(PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel(gamma(c(3.0, 0.0)).unwrap(), c(2.0, 0.0)) < 1e-14);
        assert!(gamma(c(0.0, 0.0)).is_err() && gamma(c(-3.0, 0.0)).is_err());
        for z in [c(0.3, 0.0), c(0.25, 7.0), c(-1.7, 0.4), c(4.5, -3.0), c(0.1, 20.0), c(0.45, -14.1)] {
            assert!(rel(gamma(z).unwrap(), gamma_oracle(z)) < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn zeta_values() {
        assert!((zeta(c(2.0, 0.0)).unwrap() - c(PI * PI / 6.0, 0.0)).norm() < 1e-14);
        assert!((zeta(c(0.5, 0.0)).unwrap().re + 1.460_354_508_809_586_8).abs() < 1e-13);
        assert!(zeta(c(1.0, 0.0)).is_err() && zeta(c(-0.5, 0.0)).is_err());
        for s in [c(0.3, 0.0), c(0.5, 14.134_725_141_734_693), c(0.8, -6.0), c(3.5, 2.0), c(0.1, 25.0)] {
            let want = zeta_oracle(s);
            assert!((zeta(s).unwrap() - want).norm() < 1e-12 * want.norm().max(1.0), "s = {s}");
        }
    }

    #[test]
    fn first_zero_is_small() {
        assert!(zeta(c(0.5, 14.134_725_141_734_693)).unwrap().norm() < 1e-12);
    }

    #[test]
    fn euler_product_tail() {
        let s = c(3.0, 0.0);
        assert!((euler_product(s, 10_000) - zeta(s).unwrap()).norm() < 1e-8);
    }
}
