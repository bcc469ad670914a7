//! Test-function spaces: locally constant compactly supported functions on
//! `Q_p`, real Schwartz functions, and adelic elementary functions built
//! from them, with exact p-adic Fourier transforms.

mod elementary;
mod padic;
mod real;

pub use elementary::{oscillator_state, vacuum, ElementaryFunction, SchwartzBruhat};
pub(crate) use elementary::state_norm;
pub use padic::{omega, Ball, PAdicTestFunction, StepFunction, Term, MAX_COSETS};
pub(crate) use padic::coset_count;
pub use real::{hermite_coeffs, hermite_function, hermite_poly, minus_i_pow, GenericProfile, RealTestFunction};

#[cfg(test)]
pub(crate) use padic::tests::test_function;
