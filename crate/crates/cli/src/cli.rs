//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::report::Format;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "stable-ergo",
    version,
    about = "Ergodicity criteria, rate bounds and numerical checks for σ(Y)dX driven by a symmetric α-stable X"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Ergodicity, exponential and strong ergodicity verdicts.
    Classify(Basic),
    /// Rate bounds from the criteria, with closed forms for poly:<γ>.
    Bounds(Basic),
    /// Numerical λ₀ on truncated domains.
    Eigen(Eigen),
    /// Green kernels and Green operators.
    Green(Green),
    /// Monte Carlo estimates.
    #[command(subcommand)]
    Simulate(Simulate),
    /// Run the acceptance suite.
    Validate(Validate),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Profile {
    /// poly:<γ> | expr:<text> | table:<csv with x,sigma>
    #[arg(long, conflicts_with = "sigma_file")]
    pub sigma: Option<String>,
    /// JSON profile file.
    #[arg(long)]
    pub sigma_file: Option<PathBuf>,
    /// Tail exponents of a table profile, "g-,g+".
    #[arg(long, allow_hyphen_values = true)]
    pub tail_exponents: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Output {
    /// Directory for the JSON report, CSV tables and manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Basic {
    #[command(flatten)]
    pub profile: Profile,
    #[arg(long)]
    pub alpha: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Eigen {
    #[command(flatten)]
    pub profile: Profile,
    #[arg(long)]
    pub alpha: f64,
    /// punctured | halfline | interval-complement
    #[arg(long, default_value = "punctured")]
    pub domain: String,
    /// Truncation radii, increasing.
    #[arg(long = "R", value_delimiter = ',', required = true)]
    pub r: Vec<f64>,
    /// Uniform grid with n cells on [−R, R] (even).
    #[arg(long, conflicts_with = "graded")]
    pub n: Option<usize>,
    /// Geometrically graded grid instead of a uniform one.
    #[arg(long)]
    pub graded: bool,
    #[arg(long, requires = "graded")]
    pub h0: Option<f64>,
    #[arg(long, requires = "graded")]
    pub ratio: Option<f64>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 5000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 4096)]
    pub dense_limit: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GreenMode {
    /// G^B(x, y) on the grid of --x and --y.
    Kernel,
    /// U^B f(x) for f given by --f.
    Apply,
    /// II(f)(x) on the punctured line, f = √((ω/2)|y|^{α−1}).
    Ii,
    /// II⁺(φ)(x) on the half-line.
    IiPlus,
    /// sup_x U^{ℝ∖{0}}1(x) against ω_α·I.
    ExitBound,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Green {
    #[command(flatten)]
    pub profile: Profile,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = GreenMode::Kernel)]
    pub mode: GreenMode,
    #[arg(long, default_value = "punctured")]
    pub domain: String,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub y: Vec<f64>,
    /// Test function for --mode apply: one | power:<p>.
    #[arg(long, default_value = "one")]
    pub f: String,
    #[arg(long, default_value_t = 1e-8)]
    pub rel_tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Sim {
    #[command(flatten)]
    pub profile: Profile,
    #[arg(long)]
    pub alpha: f64,
    /// euler | timechange
    #[arg(long, default_value = "timechange")]
    pub scheme: String,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub paths: Option<usize>,
    /// X-step budget per path (time-change scheme).
    #[arg(long)]
    pub max_steps: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Simulate {
    /// Mean entrance time into [−ε, ε].
    Hitting {
        #[command(flatten)]
        sim: Sim,
        #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        /// Further half-widths reported alongside --eps.
        #[arg(long, value_delimiter = ',', default_value = "0.2,0.1")]
        sweep: Vec<f64>,
    },
    /// Occupation measure against π.
    Stationary {
        #[command(flatten)]
        sim: Sim,
        #[arg(long, default_value_t = 40)]
        bins: usize,
    },
    /// Exponential decay rate of E_x f(Y_t) − π(f).
    Decay {
        #[command(flatten)]
        sim: Sim,
        #[arg(long, value_delimiter = ',', default_value = "1,3", allow_hyphen_values = true)]
        x0: Vec<f64>,
        /// Observable, in the σ expression language.
        #[arg(long, default_value = "x/(1+abs(x))")]
        f: String,
    },
    /// One sample path.
    Path {
        #[command(flatten)]
        sim: Sim,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Validate {
    /// Reduced sample sizes.
    #[arg(long)]
    pub quick: bool,
    /// Multiplies ω_α inside the Green inequality checks.
    #[arg(long, hide = true, default_value_t = 1.0)]
    pub inject_omega_scale: f64,
    #[command(flatten)]
    pub output: Output,
}
