//! One JSON object per check, one line per object.
//!
//! Floating values carry 15 significant digits and complex values are
//! written `a+bi`, so identical runs produce byte-identical output.

use std::collections::BTreeMap;
use std::time::Instant;

use adelic_core::cyclotomic::Cyclotomic;
use adelic_core::qcore::{format_rational, Rational};
use num_complex::Complex64;
use serde::{Serialize, Serializer};

/// Rounds to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

/// Shortest decimal text of `x` rounded to 15 significant digits; plain
/// notation for moderate magnitudes and exponent notation otherwise.
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round15(x);
    if r == 0.0 {
        return "0".into();
    }
    let a = r.abs();
    if (1e-5..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    let im = round15(z.im);
    let sign = if im.is_sign_negative() && im != 0.0 { '-' } else { '+' };
    format!("{}{}{}i", fmt_real(z.re), sign, fmt_real(im.abs()))
}

/// An exact cyclotomic number, written as `c·e(θ)` terms where
/// `e(θ) = exp(2πiθ)`; a rational prints as itself.
pub fn fmt_cyclotomic(z: &Cyclotomic) -> String {
    let z = z.reduced();
    if let Some(q) = z.as_rational() {
        return format_rational(&q);
    }
    let parts: Vec<String> = z
        .terms()
        .map(|(phase, c)| format!("{}*e({})", format_rational(c), format_rational(phase.phase())))
        .collect();
    parts.join(" + ")
}

pub fn fmt_rational(q: &Rational) -> String {
    format_rational(q)
}

fn serialize_real<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(round15(*x))
    } else {
        s.serialize_str(&fmt_real(*x))
    }
}

/// A single verification or evaluation. `pass` holds exactly when
/// `abs_error` is within the tolerance the check was run with.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub inputs: BTreeMap<String, String>,
    pub value: String,
    pub expected: String,
    #[serde(serialize_with = "serialize_real")]
    pub abs_error: f64,
    #[serde(serialize_with = "serialize_real")]
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub detail: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl CheckReport {
    /// A report compared against an expected value.
    pub fn compared(check: &str, value: String, expected: String, abs_error: f64, tolerance: f64) -> Self {
        CheckReport {
            check: check.into(),
            inputs: BTreeMap::new(),
            value,
            expected,
            abs_error,
            tolerance,
            pass: abs_error <= tolerance,
            detail: BTreeMap::new(),
            error: None,
            runtime_ms: None,
        }
    }

    /// A plain evaluation with nothing to compare against.
    pub fn evaluated(check: &str, value: String) -> Self {
        Self::compared(check, value, "n/a".into(), 0.0, 0.0)
    }

    /// A check that could not produce a value.
    pub fn failed(check: &str, error: impl std::fmt::Display) -> Self {
        CheckReport {
            error: Some(error.to_string()),
            pass: false,
            abs_error: f64::NAN,
            ..Self::compared(check, "n/a".into(), "n/a".into(), 0.0, 0.0)
        }
    }

    pub fn input(mut self, key: &str, value: impl Into<String>) -> Self {
        self.inputs.insert(key.into(), value.into());
        self
    }

    pub fn detail(mut self, key: &str, value: impl Into<String>) -> Self {
        self.detail.insert(key.into(), value.into());
        self
    }

    /// Extra condition that must hold besides the error bound.
    pub fn require(mut self, ok: bool) -> Self {
        self.pass &= ok;
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Runs `f`, attaching the elapsed milliseconds when `timing` is set.
pub fn timed(timing: bool, f: impl FnOnce() -> Vec<CheckReport>) -> Vec<CheckReport> {
    let start = Instant::now();
    let mut out = f();
    if timing {
        let ms = start.elapsed().as_millis() as u64;
        for r in &mut out {
            r.runtime_ms = Some(ms);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_formatting() {
        assert_eq!(fmt_real(0.25), "0.25");
        assert_eq!(fmt_real(1.0), "1");
        assert_eq!(fmt_real(-0.0), "0");
        assert_eq!(fmt_real(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt_real(2.5e-20), "2.5e-20");
        assert_eq!(fmt_real(f64::NAN), "NaN");
    }

    #[test]
    fn complex_formatting() {
        assert_eq!(fmt_complex(Complex64::new(0.5, -0.25)), "0.5-0.25i");
        assert_eq!(fmt_complex(Complex64::new(1.0, 0.0)), "1+0i");
        assert_eq!(fmt_complex(Complex64::new(0.0, -1e-30)), "0-1e-30i");
    }

    #[test]
    fn pass_tracks_tolerance() {
        assert!(CheckReport::compared("x", "1".into(), "1".into(), 1e-12, 1e-10).pass);
        assert!(!CheckReport::compared("x", "1".into(), "1".into(), 1e-9, 1e-10).pass);
        assert!(!CheckReport::failed("x", "boom").pass);
    }

    #[test]
    fn line_is_stable() {
        let r = CheckReport::compared("norm", "1/4".into(), "n/a".into(), 0.0, 0.0).input("r", "12").input("p", "2");
        assert_eq!(
            r.to_json_line(),
            r#"{"check":"norm","inputs":{"p":"2","r":"12"},"value":"1/4","expected":"n/a","abs_error":0.0,"tolerance":0.0,"pass":true}"#
        );
    }
}
