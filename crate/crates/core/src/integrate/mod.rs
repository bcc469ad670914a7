//! Integration engines: exact p-adic integrals by residue sums and sphere
//! decomposition, and real-line quadrature. These are the independent
//! oracles against which the closed forms elsewhere are checked.

mod padic;
mod real;

pub use padic::{
    integrate_ball_character, integrate_ball_character_capped, integrate_qp, integrate_zp_quadratic, sphere_integral,
    Integrand, QpIntegral, SphereDecompositionPlan, Stabilized,
};
pub use real::{fresnel, gauss_legendre, integrate_interval, integrate_real, Quadrature, QuadratureConfig};
