//! Every threshold a check is judged against. `--tolerance` overrides the
//! default of the check being run.

/// Exact rational or cyclotomic comparisons.
pub const EXACT: f64 = 0.0;

/// Real Fresnel integrals by damped quadrature against the closed form.
pub const GAUSS_REAL: f64 = 1e-6;

/// `|∏_v ∫ χ_v(ax² + bx) dx - 1|` in double precision.
pub const PRODUCT_FORMULA: f64 = 1e-10;

/// `|λ_∞(a) ∏_p λ_p(a) - 1|`; the product is formed exactly, so only the
/// final conversion rounds.
pub const LAMBDA_PRODUCT: f64 = 1e-12;

/// `|Φ(α) - Φ̃(1 - α)|` in the critical strip.
pub const TATE: f64 = 1e-6;

/// `|ξ(α) - ξ(1 - α)|` in the critical strip.
pub const ZETA_FE: f64 = 1e-10;

/// `|ζ(1/2 + 14.134725i)|`: the argument is the first zero to 7 digits.
pub const ZETA_FIRST_ZERO: f64 = 1e-3;

/// Relative spread of `Φ_{ψ0}(α) / ξ(α)` over `α ∈ {2, 3, 4}`.
pub const VACUUM_RELATIVE: f64 = 1e-8;

/// Sup error of the quadrature Fourier transform of the real vacuum.
pub const VACUUM_FOURIER: f64 = 1e-10;

/// Largest `|G - I|` entry of the Hermite Gram matrix.
pub const HERMITE_GRAM: f64 = 1e-9;

/// Largest Hermite degree in the Gram check.
pub const HERMITE_GRAM_DEGREE: u32 = 8;

/// `χ` pairing against an independent Fourier evaluation.
pub const CHI_PAIRING: f64 = 1e-10;

/// p-adic precision exponent of the trigonometric identities.
pub const TRIG_PRECISION: i64 = 12;

/// Default working precision when neither `--precision` nor the
/// environment sets one.
pub const DEFAULT_PRECISION: i64 = 20;

/// Environment variable holding the default working precision.
pub const PRECISION_ENV: &str = "ADELIC_PRECISION";
