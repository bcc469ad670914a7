use alloc::string::String;

use thiserror::Error;

/// Everything that can go wrong inside the core crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("zero has no {0}")]
    Zero(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot parse {0:?} as a rational literal")]
    Parse(String),
    #[error("{0} is out of range: {1}")]
    Domain(String, &'static str),
    #[error("pole at {0}")]
    Pole(String),
    #[error("insufficient p-adic precision: need {needed}, have {available}")]
    Precision { needed: i64, available: i64 },
    #[error("integral did not stabilize: {0}")]
    NotStabilized(String),
    #[error("quadrature error estimate {estimate:e} exceeds budget {budget:e}")]
    QuadratureBudget { estimate: f64, budget: f64 },
    #[error("component at p = {0} is not specified")]
    MissingComponent(u64),
    #[error("missing tail certificate: {0}")]
    TailCertificate(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
