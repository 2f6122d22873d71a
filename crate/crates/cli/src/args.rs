use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "trunclap", version, about = "Truncated-Laplacian experiments with machine-readable reports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Viscosity verification of a catalog candidate against the bundled expectation table
    Verify(VerifyArgs),
    /// Radial profile by RK4 with quadrature and closed-form cross-checks
    Radial(RadialArgs),
    /// Grid certificate for the principal eigenvalue bound on the collapsing domains
    Eigenbound(EigenboundArgs),
    /// Wide-stencil Dirichlet solve on a rectangle
    Fd(FdArgs),
    /// List candidates, nonlinearities and expected verdicts
    Catalog(CatalogArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; standard output when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Catalog name, e.g. halfline-tanh, tanh-shifted:1, radial-closed:0.5,1
    #[arg(long)]
    pub candidate: String,
    /// Ambient dimension
    #[arg(long = "N", default_value_t = 2)]
    pub ambient_dim: usize,
    /// Operator index, 1 <= k <= N-1 (defaults to the k in a radial-closed name, else 1)
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = trunclap_core::viscosity::DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub grid_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub grid_end: Option<f64>,
    #[arg(long)]
    pub grid_step: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct RadialArgs {
    /// Nonlinearity: allen-cahn, power:a,b,gamma, linear:s
    #[arg(long = "f", default_value = "allen-cahn")]
    pub nonlinearity: String,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 10.0)]
    pub rmax: f64,
    #[arg(long, default_value_t = trunclap_core::radial::DEFAULT_STEP)]
    pub step: f64,
    /// Ambient dimension for the PDE residual (defaults to k + 1)
    #[arg(long = "N")]
    pub ambient_dim: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct EigenboundArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct FdArgs {
    /// halfline-tanh-y, plain-tanh-y, tanh-shifted-y:c, zero or ramp-x:s
    #[arg(long)]
    pub boundary: String,
    /// `LO HI` for a square or `XLO XHI YLO YHI`
    #[arg(long = "box", num_args = 2..=4, allow_negative_numbers = true, default_values_t = [-2.0, 2.0])]
    pub bounds: Vec<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub h: f64,
    #[arg(long, default_value_t = 2)]
    pub radius: u32,
    #[arg(long = "f", default_value = "allen-cahn")]
    pub nonlinearity: String,
    /// Pseudo-time step; defaults to 0.9 of the monotone bound
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, default_value_t = 200_000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub threshold: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    #[command(flatten)]
    pub output: OutputArgs,
}
