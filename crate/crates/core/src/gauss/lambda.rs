use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::characters::UnitPhase;
use crate::cyclotomic::{legendre, Cyclotomic};
use crate::error::{Error, Result};
use crate::integrate::{integrate_qp, Integrand, SphereDecompositionPlan};
use crate::qcore::{int, residue_mod, valuation, Prime, Rational};

/// A place of `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Finite(Prime),
}

impl core::fmt::Display for Place {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// `a = p^γ a_0`: parity of `γ` and the unit residue the table keys on
/// (`a_0 mod p`, or `a_0 mod 8` at `p = 2`).
pub fn lambda_key(p: Prime, a: &Rational) -> Result<(i64, u64)> {
    let g = valuation(a, p).finite().ok_or(Error::Zero("λ_p(0)"))?;
    let unit = a * p.rpow(-g);
    let m = if p.get() == 2 { 8 } else { p.get() };
    let r = residue_mod(&unit, &BigInt::from(m), p).to_u64().expect("small residue");
    Ok((g.mod_floor(&2), r))
}

/// `λ_p(a)` from the frozen table.
///
/// Odd `p`: `1` for even `γ`; for odd `γ`, `(a_0/p)` when `p ≡ 1 mod 4` and
/// `i (a_0/p)` when `p ≡ 3 mod 4`. At 2: `ζ_8^{±1}` for even `γ` with sign
/// `+` iff `a_0 ≡ 1 mod 4`, and `ζ_8^{a_0}` for odd `γ`.
pub fn lambda_p(p: Prime, a: &Rational) -> Result<UnitPhase> {
    let (parity, r) = lambda_key(p, a)?;
    if p.get() == 2 {
        if parity == 1 {
            return Ok(UnitPhase::from_ratio(r as i64, 8));
        }
        return Ok(if r % 4 == 1 { UnitPhase::from_ratio(1, 8) } else { UnitPhase::from_ratio(-1, 8) });
    }
    if parity == 0 {
        return Ok(UnitPhase::one());
    }
    let sign = if legendre(r as i64, p) == 1 { UnitPhase::one() } else { UnitPhase::from_ratio(1, 2) };
    if p.get() % 4 == 1 {
        Ok(sign)
    } else {
        Ok(&sign * &UnitPhase::from_ratio(1, 4))
    }
}

/// `λ_∞(a) = e^{-iπ sign(a)/4}`.
pub fn lambda_inf(a: &Rational) -> Result<UnitPhase> {
    if a.is_zero() {
        return Err(Error::Zero("λ_∞(0)"));
    }
    Ok(if a > &Rational::zero() { UnitPhase::from_ratio(-1, 8) } else { UnitPhase::from_ratio(1, 8) })
}

pub fn lambda_v(place: Place, a: &Rational) -> Result<UnitPhase> {
    match place {
        Place::Infinity => lambda_inf(a),
        Place::Finite(p) => lambda_p(p, a),
    }
}

/// One calibration cell: the λ value forced by the integration oracle next
/// to the frozen table entry.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationCell {
    pub prime: Prime,
    pub parity: i64,
    pub residue: u64,
    pub oracle: UnitPhase,
    pub table: UnitPhase,
}

impl CalibrationCell {
    pub fn agrees(&self) -> bool {
        self.oracle == self.table
    }
}

/// Recovers `λ_p(a)` from `∫_{Q_p} χ_p(a x²) dx = λ_p(a) |2a|_p^{-1/2}`
/// by exact comparison against the eighth roots of unity.
pub fn lambda_from_oracle(p: Prime, a: &Rational, plan: &SphereDecompositionPlan) -> Result<UnitPhase> {
    let zero = Rational::zero();
    let value = integrate_qp(p, Integrand::Gauss { a, b: &zero }, plan)?.value;
    let v2a = valuation(&(a * int(2)), p).finite().expect("a ≠ 0");
    let modulus = Cyclotomic::sqrt_prime_power(p, v2a);
    (0..8)
        .map(|k| UnitPhase::from_ratio(k, 8))
        .find(|z| modulus.rotate(z) == value)
        .ok_or_else(|| Error::NotStabilized(alloc::format!("λ_{p}({a}) is not an eighth root of unity")))
}

/// Re-derives every cell of the table at `p` from the oracle.
pub fn calibrate(p: Prime, plan: &SphereDecompositionPlan) -> Result<Vec<CalibrationCell>> {
    let residues: Vec<u64> = if p.get() == 2 { alloc::vec![1, 3, 5, 7] } else { (1..p.get()).collect() };
    let mut out = Vec::new();
    for parity in 0..2 {
        for &r in &residues {
            let a = p.rpow(parity) * Rational::from_integer(r.into());
            out.push(CalibrationCell {
                prime: p,
                parity,
                residue: r,
                oracle: lambda_from_oracle(p, &a, plan)?,
                table: lambda_p(p, &a)?,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::ratio;
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn table_matches_oracle() {
        let plan = SphereDecompositionPlan::default();
        for q in [2u64, 3, 5, 7, 11, 13] {
            for cell in calibrate(p(q), &plan).unwrap() {
                assert!(cell.agrees(), "{cell:?}");
            }
        }
    }

    #[test]
    fn examples() {
        assert_eq!(lambda_inf(&int(1)).unwrap(), UnitPhase::from_ratio(-1, 8));
        assert_eq!(lambda_p(p(5), &int(3)).unwrap(), UnitPhase::one());
        assert_eq!(lambda_p(p(2), &int(1)).unwrap(), UnitPhase::from_ratio(1, 8));
        assert!(lambda_p(p(3), &int(0)).is_err());
        // λ_∞(1) λ_2(1) = 1
        assert!((&lambda_inf(&int(1)).unwrap() * &lambda_p(p(2), &int(1)).unwrap()).is_one());
    }

    proptest! {
        #[test]
        fn square_invariance(
            an in 1i64..500, ad in 1i64..500, cn in 1i64..60, cd in 1i64..60, neg in any::<bool>(),
            q in prop::sample::select(vec![2u64, 3, 5, 7, 11]),
        ) {
            let a = ratio(if neg { -an } else { an }, ad);
            let c = ratio(cn, cd);
            let ac2 = &a * &c * &c;
            prop_assert_eq!(lambda_p(p(q), &a).unwrap(), lambda_p(p(q), &ac2).unwrap());
            prop_assert_eq!(lambda_inf(&a).unwrap(), lambda_inf(&ac2).unwrap());
        }
    }
}
