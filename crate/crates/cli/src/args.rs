//! Command-line grammar.

use adelic_core::qcore::{parse_rational, Prime, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::format::parse_complex;
use crate::tolerances::{DEFAULT_PRECISION, PRECISION_ENV};

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|_| format!("'{s}' is not a rational literal like -9/8"))
}

fn prime(s: &str) -> Result<Prime, String> {
    let n: u64 = s.parse().map_err(|_| format!("'{s}' is not a positive integer"))?;
    Prime::new(n).map_err(|_| format!("{n} is not a prime"))
}

fn complex(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|_| format!("'{s}' is not a complex literal like 0.4,2"))
}

/// A prime or the real place.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaceArg {
    Infinity,
    Prime(Prime),
}

fn place(s: &str) -> Result<PlaceArg, String> {
    match s {
        "inf" | "infinity" | "oo" => Ok(PlaceArg::Infinity),
        _ => prime(s).map(PlaceArg::Prime),
    }
}

#[derive(Debug, Parser)]
#[command(name = "adelic", version, about = "Adelic analysis checks with JSON-lines reports")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Override the pass threshold of every check.
    #[arg(long, global = true, value_name = "τ")]
    pub tolerance: Option<f64>,
    /// Machine-readable output where a command also has a human form.
    #[arg(long, global = true)]
    pub json: bool,
    /// Attach `runtime_ms` to each report; off by default so output is reproducible.
    #[arg(long, global = true)]
    pub timing: bool,
    /// p-adic working precision (exponent of p).
    #[arg(long, global = true, env = PRECISION_ENV, default_value_t = DEFAULT_PRECISION)]
    pub precision: i64,
    /// Sphere indices `-J..=J` available to the p-adic integrator.
    #[arg(long, global = true, value_name = "J", default_value_t = 64)]
    pub sphere_range: i64,
    /// Largest residue sum the p-adic integrator may enumerate.
    #[arg(long, global = true, default_value_t = 1 << 23)]
    pub max_cosets: u64,
    /// Truncation radius of the real-line quadratures run by the CLI.
    #[arg(long, global = true, default_value_t = 10.0)]
    pub quad_radius: f64,
    /// Gauss–Legendre nodes per panel for those quadratures.
    #[arg(long, global = true, default_value_t = 20)]
    pub quad_nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistributionName {
    Delta,
    Chi,
    ChiQuad,
    PiAlpha,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// p-adic norm `|r|_p`, or the product over all places when `-p` is absent.
    Norm {
        #[arg(short, value_parser = rational, allow_hyphen_values = true)]
        r: Rational,
        #[arg(short, value_parser = prime)]
        p: Option<Prime>,
    },
    /// Fractional part `{r}_p`.
    Frac {
        #[arg(short, value_parser = rational, allow_hyphen_values = true)]
        r: Rational,
        #[arg(short, value_parser = prime)]
        p: Prime,
    },
    /// Additive character `χ_p(r)`, or the principal character when `-p` is absent.
    Chi {
        #[arg(short, value_parser = rational, allow_hyphen_values = true)]
        r: Rational,
        #[arg(short, value_parser = prime)]
        p: Option<Prime>,
    },
    /// Pair a distribution with a test function.
    Pair {
        #[arg(long, value_enum)]
        dist: DistributionName,
        /// Test function document, inline JSON or `@path`.
        #[arg(long)]
        function: Option<String>,
        /// Quadratic coefficient of `chi-quad` (principal idele).
        #[arg(short, value_parser = rational, allow_hyphen_values = true)]
        a: Option<Rational>,
        /// Linear coefficient of `chi-quad`, or the point of `delta` (principal adele).
        #[arg(short, value_parser = rational, allow_hyphen_values = true)]
        b: Option<Rational>,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        alpha: Option<Complex64>,
    },
    /// Local Gauss integral: closed form against the integration oracle.
    Gauss {
        #[arg(short, value_parser = place)]
        p: PlaceArg,
        #[arg(short, value_parser = rational, allow_hyphen_values = true)]
        a: Rational,
        #[arg(short, value_parser = rational, allow_hyphen_values = true, default_value = "0")]
        b: Rational,
    },
    /// Product of the local Gauss integrals over all places.
    ProductCheck {
        #[arg(short, value_parser = rational, allow_hyphen_values = true)]
        a: Rational,
        #[arg(short, value_parser = rational, allow_hyphen_values = true, default_value = "0")]
        b: Rational,
    },
    /// Product of `λ_v(a)` over all places.
    LambdaCheck {
        #[arg(short, value_parser = rational, allow_hyphen_values = true)]
        a: Rational,
    },
    /// Mellin transform `Φ(α)` of an elementary function.
    Mellin {
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        alpha: Complex64,
        #[arg(long)]
        function: Option<String>,
    },
    /// Tate formula `Φ(α) = Φ̃(1 - α)`.
    Tate {
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        alpha: Complex64,
        #[arg(long)]
        function: Option<String>,
    },
    /// Functional equation `ξ(α) = ξ(1 - α)`.
    ZetaFe {
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        alpha: Complex64,
    },
    /// p-adic oscillator: trigonometric identities and vacuum invariance.
    OscillatorCheck {
        #[arg(short, value_parser = prime)]
        p: Prime,
        #[arg(short, value_parser = rational, allow_hyphen_values = true)]
        t: Rational,
        /// Sample points `x`, comma separated; defaults to `0, 1/p, 1, p`.
        #[arg(long, value_parser = rational, value_delimiter = ',', allow_hyphen_values = true)]
        samples: Vec<Rational>,
        /// Energy `E_p` in the eigenvalue `χ_p(E_p t)`.
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "0")]
        energy: Rational,
    },
    /// Re-derive the `λ_p` table from the integration oracle.
    CalibrateLambda {
        #[arg(short, value_parser = prime)]
        p: Prime,
    },
    /// Run the acceptance grid.
    Suite {
        /// Restrict to these criteria (by name or number); repeatable.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
}
