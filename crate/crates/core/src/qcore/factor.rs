use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Prime;
use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = rho(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

/// Distinct prime divisors of `|n|`, ascending; empty for `0` and `±1`.
pub fn prime_factors(n: &BigInt) -> Result<Vec<Prime>> {
    let mut m = n.abs();
    let mut out: Vec<u64> = Vec::new();
    if m.is_zero() {
        return Ok(Vec::new());
    }
    let mut q = 2u64;
    while q < 1 << 12 && !m.is_one() {
        if m.to_u64().is_some() {
            break;
        }
        let qb = BigInt::from(q);
        if m.is_multiple_of(&qb) {
            out.push(q);
            while m.is_multiple_of(&qb) {
                m /= &qb;
            }
        }
        q += 1;
    }
    if !m.is_one() {
        let small = m
            .to_u64()
            .ok_or_else(|| Error::InvalidArgument(alloc::format!("cannot factor {n}: cofactor exceeds 64 bits")))?;
        factor_u64(small, &mut out);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out.into_iter().map(Prime::new_unchecked).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn factors() {
        let f = |n: i64| prime_factors(&BigInt::from(n)).unwrap().iter().map(|p| p.get()).collect::<Vec<_>>();
        assert_eq!(f(12), vec![2, 3]);
        assert_eq!(f(-30), vec![2, 3, 5]);
        assert_eq!(f(1), Vec::<u64>::new());
        assert_eq!(f(999_983 * 1_000_003), vec![999_983, 1_000_003]);
        let big = BigInt::from(2).pow(80u32) * BigInt::from(999_983);
        assert_eq!(prime_factors(&big).unwrap().iter().map(|p| p.get()).collect::<Vec<_>>(), vec![2, 999_983]);
    }
}
