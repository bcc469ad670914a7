//! Exact and numerical harmonic analysis on the adeles of `Q`.
//!
//! Rational arithmetic and p-adic integrals are exact; real-place quantities
//! are computed in `f64` with explicit error budgets.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bruhat;
pub mod characters;
pub mod cyclotomic;
pub mod distrib;
pub mod error;
pub mod gauss;
pub mod integrate;
pub mod meltate;
pub mod oscillator;
pub mod qcore;

pub use error::{Error, Result};
