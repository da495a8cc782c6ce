use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kms_levels::curve::{DEFAULT_SAMPLES, MIN_SAMPLES};
use kms_levels::thresholds::{EigenType, Tolerances};
use kms_levels::Complex64;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "kms-levels", version, about = "Eigenvalue level curves of the KMS matrix K_n(rho) = [rho^|j-l|]")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print N_min(n) and, for a level N, u0/x0 or v0 and v_im.
    Thresholds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        level: Option<f64>,
    },
    /// Trace a level curve and write it as CSV or SVG.
    Curve(CurveArgs),
    /// Print the type-1 and type-2 eigenvalues of K_n(rho).
    Spectrum {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        rho: String,
    },
    /// Count type-k eigenvalues above N by winding number and directly.
    Count {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long, allow_hyphen_values = true)]
        rho: String,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Level curves, roots and counts of the cubic companion model.
    Cubic(CubicArgs),
    /// Run the built-in check suites.
    Verify {
        #[arg(value_enum, default_value_t = SuiteArg::Quick)]
        suite: SuiteArg,
        /// Directory for the datasets written by the full suite.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Count with reversed curves (mutation check).
        #[arg(long, hide = true)]
        reverse_orientation: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct LevelArgs {
    #[arg(long)]
    pub n: usize,
    /// The level N.
    #[arg(long)]
    pub level: f64,
    /// Eigenvalue type, 1 (skew-symmetric eigenvectors) or 2 (symmetric).
    #[arg(long = "type", value_parser = clap::value_parser!(u8).range(1..=2))]
    pub kind: u8,
    #[arg(long)]
    pub tol_root: Option<f64>,
    #[arg(long)]
    pub tol_residual: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub level: LevelArgs,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CubicArgs {
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    /// Level N; with --n0-units, in multiples of N0.
    #[arg(long)]
    pub level: Option<f64>,
    #[arg(long)]
    pub n0_units: bool,
    /// Report the roots and counts at this rho.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<String>,
    #[arg(long, default_value_t = 4000)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Quick,
    Full,
}

/// Validated parameters of one curve run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub level: f64,
    pub kind: EigenType,
    pub samples: usize,
    pub tol: Tolerances,
}

impl RunConfig {
    pub fn from_args(args: &LevelArgs, samples: usize) -> Result<Self, CliError> {
        if samples < MIN_SAMPLES {
            return Err(CliError::validation(format!(
                "--samples must be at least {MIN_SAMPLES}, got {samples}"
            )));
        }
        let mut tol = Tolerances::default();
        if let Some(t) = args.tol_root {
            if !(t > 0.0 && t < 1.0) {
                return Err(CliError::validation(format!("--tol-root must lie in (0, 1), got {t}")));
            }
            tol.root = t;
        }
        if let Some(t) = args.tol_residual {
            if !(t > 0.0 && t < 1.0) {
                return Err(CliError::validation(format!("--tol-residual must lie in (0, 1), got {t}")));
            }
            tol.residual = t;
        }
        Ok(RunConfig {
            n: args.n,
            level: args.level,
            kind: EigenType::from_index(args.kind)?,
            samples,
            tol,
        })
    }
}

pub fn parse_rho(text: &str) -> Result<Complex64, CliError> {
    Ok(kms_levels::io::parse_complex(text)?)
}
