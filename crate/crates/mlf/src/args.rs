use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const LONG_ABOUT: &str = "\
Evaluate the two-parameter Mittag-Leffler function E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta)
and run the numerical checks built on it.

Conventions:
  * Complex powers use the principal branch, arg z in (-pi, pi].
  * Numbers are printed with 17 significant digits; JSON never contains NaN
    (non-finite values are null).
  * MLF_THREADS caps the worker threads used by grid checks.

Exit codes: 0 success, 2 invalid flags or parameters, 3 evaluation failure,
4 a counting contour kept passing through a zero after 3 perturbed retries.";

#[derive(Parser, Debug)]
#[command(name = "mlf", version, about = "Mittag-Leffler function toolkit", long_about = LONG_ABOUT)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate E_{alpha,beta}(re + i im) with an error estimate
    Eval(EvalArgs),
    /// Solve for the boundary function h(x)
    H(HArgs),
    /// Real zeros on an interval and argument-principle counts in a rectangle
    Zeros(ZerosArgs),
    /// Check |E(z)| against E(Re z) on a lattice
    Check(CheckArgs),
    /// Sampled complete-monotonicity test
    Cm(CmArgs),
    /// Write a parameter-space figure (SVG) and its lattice table (CSV)
    Figure(FigureArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ParamArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub p: ParamArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub re: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub im: f64,
    /// Target relative accuracy
    #[arg(long, default_value_t = 1e-15)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct HArgs {
    /// One or more x ≥ 0 (comma-separated or repeated)
    #[arg(long, required = true, value_delimiter = ',')]
    pub x: Vec<f64>,
    #[arg(long, default_value_t = 1e-14)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ZerosArgs {
    #[command(flatten)]
    pub p: ParamArgs,
    #[arg(long, allow_negative_numbers = true, default_value_t = -50.0)]
    pub xmin: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub xmax: f64,
    /// Scan step; defaults to a quarter of the expected zero spacing
    #[arg(long)]
    pub step: Option<f64>,
    /// Counting rectangle RE_MIN,RE_MAX,IM_MIN,IM_MAX
    #[arg(long, allow_hyphen_values = true)]
    pub rect: Option<String>,
    /// Initial boundary samples for the winding count
    #[arg(long, default_value_t = mlf_core::zeros::DEFAULT_BOUNDARY)]
    pub boundary: usize,
    /// Also isolate and polish every zero in the rectangle down to this box side
    #[arg(long)]
    pub locate: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IneqArg {
    #[value(name = "LE")]
    Le,
    #[value(name = "GE")]
    Ge,
    #[value(name = "two-sided")]
    TwoSided,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub p: ParamArgs,
    #[arg(long, value_enum)]
    pub ineq: IneqArg,
    /// Lattice RE_MIN,RE_MAX,IM_MIN,IM_MAX (endpoints included)
    #[arg(long, allow_hyphen_values = true, default_value = "-20,20,-20,20")]
    pub grid: String,
    /// Points per axis: N or N_RE,N_IM
    #[arg(long, default_value = "200")]
    pub points: String,
    #[arg(long, default_value_t = 1e-14)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    /// x ↦ E(−x)
    #[value(name = "e-of-minus-x")]
    EOfMinusX,
    /// x ↦ 1/E(x)
    #[value(name = "reciprocal")]
    Reciprocal,
}

#[derive(Args, Debug)]
pub struct CmArgs {
    #[command(flatten)]
    pub p: ParamArgs,
    #[arg(long, value_enum)]
    pub target: TargetArg,
    /// Sample points (comma-separated); default 0.05,0.2,1,5,20
    #[arg(long, value_delimiter = ',')]
    pub points: Option<Vec<f64>>,
    /// Highest derivative order (≤ 24)
    #[arg(long, default_value_t = 12)]
    pub order: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    /// 1: additivity regions; 2: inequality regions
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub which: u8,
    /// Lattice points per axis (≥ 50)
    #[arg(long, default_value_t = 200)]
    pub resolution: usize,
    /// Output directory; receives figureN.svg and figureN.csv
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}
