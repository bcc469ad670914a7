//! Test functions as JSON documents.
//!
//! ```json
//! {"terms": [{
//!    "coeff": "1",
//!    "real": [[0, "1"], [2, "0.5,-1"]],
//!    "primes": {"3": [{"coeff": "2/3", "phase": "1/4", "center": "1/3", "radiusExp": -1}]}
//! }]}
//! ```
//!
//! `real` lists `(degree, coefficient)` pairs of the Hermite expansion and
//! defaults to the Gaussian; each prime lists ball terms
//! `coeff · e(phase) · χ_p(frequency · x) · 1[center + p^radiusExp Z_p]`.
//! A bare term object without `terms` is accepted as a single term.
//! Complex coefficients are written `"re,im"` or `"re"`.

use std::collections::BTreeMap;

use adelic_core::bruhat::{Ball, ElementaryFunction, PAdicTestFunction, RealTestFunction, SchwartzBruhat, Term};
use adelic_core::characters::UnitPhase;
use adelic_core::cyclotomic::Cyclotomic;
use adelic_core::qcore::{format_rational, parse_rational, Prime, Rational};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("malformed test function: {0}")]
    Json(String),
    #[error("bad number '{0}'")]
    Number(String),
    #[error("{0} is not a prime")]
    Prime(u64),
    #[error("real factor '{0}' is not a Hermite expansion and cannot be written")]
    Unserializable(String),
    #[error(transparent)]
    Core(#[from] adelic_core::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallDoc {
    #[serde(default = "one")]
    pub coeff: String,
    #[serde(default = "zero", skip_serializing_if = "is_zero")]
    pub phase: String,
    #[serde(default = "zero", skip_serializing_if = "is_zero")]
    pub frequency: String,
    pub center: String,
    #[serde(rename = "radiusExp")]
    pub radius_exp: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    #[serde(default = "one")]
    pub coeff: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real: Option<Vec<(u32, String)>>,
    #[serde(default)]
    pub primes: BTreeMap<u64, Vec<BallDoc>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDoc {
    pub terms: Vec<TermDoc>,
}

fn one() -> String {
    "1".into()
}

fn zero() -> String {
    "0".into()
}

fn is_zero(s: &String) -> bool {
    s == "0"
}

fn rational(s: &str) -> Result<Rational, FormatError> {
    parse_rational(s).map_err(|_| FormatError::Number(s.into()))
}

pub fn parse_complex(s: &str) -> Result<Complex64, FormatError> {
    let bad = || FormatError::Number(s.into());
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(num(re)?, num(im)?)),
        None => Ok(Complex64::new(num(s)?, 0.0)),
    }
}

fn write_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{},{}", z.re, z.im)
    }
}

impl BallDoc {
    fn to_term(&self, p: Prime) -> Result<Term, FormatError> {
        let coeff = Cyclotomic::term(rational(&self.coeff)?, UnitPhase::new(rational(&self.phase)?));
        let ball = Ball::new(p, rational(&self.center)?, self.radius_exp);
        Ok(Term::new(coeff, rational(&self.frequency)?, ball))
    }
}

impl TermDoc {
    pub fn to_elementary(&self) -> Result<(Complex64, ElementaryFunction), FormatError> {
        let real = match &self.real {
            None => RealTestFunction::gaussian(),
            Some(pairs) => RealTestFunction::Hermite(
                pairs.iter().map(|(n, c)| Ok((parse_complex(c)?, *n))).collect::<Result<_, FormatError>>()?,
            ),
        };
        let mut f = ElementaryFunction::new(real);
        for (&q, balls) in &self.primes {
            let p = Prime::new(q).map_err(|_| FormatError::Prime(q))?;
            let mut local = PAdicTestFunction::zero(p);
            for b in balls {
                local.push(b.to_term(p)?)?;
            }
            f = f.with_local(local);
        }
        Ok((parse_complex(&self.coeff)?, f))
    }

    pub fn from_elementary(c: Complex64, f: &ElementaryFunction) -> Result<Self, FormatError> {
        let real = match f.real() {
            RealTestFunction::Hermite(cs) => cs.iter().map(|&(c, n)| (n, write_complex(c))).collect(),
            RealTestFunction::Generic(g) => return Err(FormatError::Unserializable(g.label.clone())),
        };
        let mut primes = BTreeMap::new();
        for (p, local) in f.locals() {
            let mut balls = Vec::new();
            for t in local.terms() {
                for (phase, c) in t.coeff().terms() {
                    balls.push(BallDoc {
                        coeff: format_rational(c),
                        phase: format_rational(phase.phase()),
                        frequency: format_rational(t.frequency()),
                        center: format_rational(t.ball().center()),
                        radius_exp: t.ball().radius_exp(),
                    });
                }
            }
            primes.insert(p.get(), balls);
        }
        Ok(TermDoc { coeff: write_complex(c), real: Some(real), primes })
    }
}

impl FunctionDoc {
    pub fn to_function(&self) -> Result<SchwartzBruhat, FormatError> {
        let mut g = SchwartzBruhat::new();
        for t in &self.terms {
            let (c, f) = t.to_elementary()?;
            g = g.with(c, f);
        }
        Ok(g)
    }

    pub fn from_function(g: &SchwartzBruhat) -> Result<Self, FormatError> {
        let terms = g.terms().iter().map(|(c, f)| TermDoc::from_elementary(*c, f)).collect::<Result<_, _>>()?;
        Ok(FunctionDoc { terms })
    }
}

/// Reads a document with either a `terms` list or a single term.
pub fn parse_function(text: &str) -> Result<SchwartzBruhat, FormatError> {
    let json = |e: serde_json::Error| FormatError::Json(e.to_string());
    let value: serde_json::Value = serde_json::from_str(text).map_err(json)?;
    // untagged enums lose integer map keys, so dispatch by hand
    if value.get("terms").is_some() {
        serde_json::from_value::<FunctionDoc>(value).map_err(json)?.to_function()
    } else {
        let (c, f) = serde_json::from_value::<TermDoc>(value).map_err(json)?.to_elementary()?;
        Ok(SchwartzBruhat::new().with(c, f))
    }
}

/// A single elementary term; sums are rejected.
pub fn parse_elementary(text: &str) -> Result<ElementaryFunction, FormatError> {
    let g = parse_function(text)?;
    match g.terms() {
        [(c, f)] if *c == Complex64::new(1.0, 0.0) => Ok(f.clone()),
        [(c, f)] => Ok(f.scale_real(*c)),
        _ => Err(FormatError::Json("expected a single elementary term".into())),
    }
}

pub fn write_function(g: &SchwartzBruhat) -> Result<String, FormatError> {
    Ok(serde_json::to_string(&FunctionDoc::from_function(g)?).expect("document serializes"))
}

/// True when the two functions agree exactly at every prime and in the
/// Hermite coefficients.
pub fn same_function(a: &SchwartzBruhat, b: &SchwartzBruhat) -> Result<bool, FormatError> {
    if a.terms().len() != b.terms().len() {
        return Ok(false);
    }
    for ((ca, fa), (cb, fb)) in a.terms().iter().zip(b.terms()) {
        if ca != cb || fa.locals().len() != fb.locals().len() {
            return Ok(false);
        }
        let (RealTestFunction::Hermite(ra), RealTestFunction::Hermite(rb)) = (fa.real(), fb.real()) else {
            return Ok(false);
        };
        if ra != rb {
            return Ok(false);
        }
        for (p, la) in fa.locals() {
            if !la.sub(&fb.local(*p)).canonical()?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use adelic_core::qcore::{principal_adele, ratio};

    #[test]
    fn single_term_document() {
        let g = parse_function(r#"{"primes": {"3": [{"center": "1/3", "radiusExp": -1}]}}"#).unwrap();
        assert_eq!(g.terms().len(), 1);
        let v = g.evaluate(&principal_adele(&ratio(1, 3))).unwrap();
        // ball at 3 contains 1/3, 1/3 ∈ Z_2, and the real factor is e^{-πx²}
        assert!((v.re - (-std::f64::consts::PI / 9.0).exp()).abs() < 1e-15, "{v}");
    }

    #[test]
    fn round_trip() {
        let text = r#"{"terms": [
            {"coeff": "2,-1", "real": [[0, "1"], [3, "0.5,0.25"]],
             "primes": {"2": [{"coeff": "3/4", "phase": "1/8", "frequency": "1/4", "center": "1/2", "radiusExp": 1}],
                        "5": [{"center": "0", "radiusExp": -1}, {"coeff": "-1", "center": "1/5", "radiusExp": 2}]}},
            {"primes": {}}
        ]}"#;
        let g = parse_function(text).unwrap();
        let again = parse_function(&write_function(&g).unwrap()).unwrap();
        assert!(same_function(&g, &again).unwrap());
        assert_eq!(write_function(&g).unwrap(), write_function(&again).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_function("{"), Err(FormatError::Json(_))));
        assert!(matches!(parse_function(r#"{"primes": {"4": []}}"#), Err(FormatError::Prime(4))));
        assert!(matches!(
            parse_function(r#"{"primes": {"3": [{"center": "x", "radiusExp": 0}]}}"#),
            Err(FormatError::Number(_))
        ));
        assert!(parse_function(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.4,0").unwrap(), Complex64::new(0.4, 0.0));
        assert_eq!(parse_complex(" -1 , 2.5").unwrap(), Complex64::new(-1.0, 2.5));
        assert!(parse_complex("a,b").is_err());
    }
}
