#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isoprofile_core::{Diameter, Dimension};

use output::Format;

/// Isoperimetric model profiles, their certification, and the
/// one-dimensional, spectral and warped-product checks built on them.
#[derive(Debug, Parser)]
#[command(name = "isoprofile", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Model {
    /// Curvature lower bound K > 0.
    #[arg(long = "K", default_value_t = 1.0, allow_hyphen_values = true)]
    k: f64,
    /// Effective dimension: `inf` or a negative number.
    #[arg(long = "N", default_value = "inf", allow_hyphen_values = true, value_parser = args::dimension)]
    n: Dimension,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the model profile I_(K,N,D) on a theta grid.
    Profile {
        #[command(flatten)]
        model: Model,
        /// Diameter bound: `inf` or a positive number.
        #[arg(long = "D", default_value = "inf", value_parser = args::diameter)]
        d: Diameter,
        /// Comma list or inclusive range start:stop:step.
        #[arg(long, default_value = "0.05:0.95:0.05", value_parser = args::thetas)]
        thetas: args::List<f64>,
    },
    /// Certify that finite-diameter profiles exceed the unbounded one.
    VerifyAppendix {
        #[arg(long = "K", default_value_t = 1.0, allow_hyphen_values = true)]
        k: f64,
        /// Negative dimensions.
        #[arg(long = "Ns", default_value = "-2,-5,-10", allow_hyphen_values = true, value_parser = args::list)]
        ns: args::List<f64>,
        /// Finite diameters.
        #[arg(long = "Ds", default_value = "0.5,1,2,5", value_parser = args::list)]
        ds: args::List<f64>,
        #[arg(long, default_value = "0.05:0.95:0.05", value_parser = args::thetas)]
        thetas: args::List<f64>,
        /// Certify the N = inf analogue instead.
        #[arg(long)]
        gaussian: bool,
    },
    /// Half-line profiles, set reduction and rigidity on a weighted line.
    Needle {
        #[arg(long, value_enum, default_value = "gaussian")]
        density: commands::Density,
        #[command(flatten)]
        model: Model,
        /// Interval length for the exponential density.
        #[arg(long = "D")]
        d: Option<f64>,
        /// Phase of the cosh density.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        gamma: f64,
        /// Scale of the cosh density.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// File of `x psi` pairs for the tabulated density.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value = "0.5", value_parser = args::thetas)]
        thetas: args::List<f64>,
        /// Reduce this set (`lo:hi,lo:hi`) to a half-line and report the trajectory.
        #[arg(long, allow_hyphen_values = true, value_parser = args::set)]
        set: Option<isoprofile_core::needle::IntervalUnion>,
        /// Test whether the potential is a model potential.
        #[arg(long)]
        rigidity: bool,
    },
    /// First non-zero eigenvalue of the model weighted Laplacian.
    Spectral {
        #[command(flatten)]
        model: Model,
        /// Node counts.
        #[arg(long = "n", default_value = "501,1001,2001,4001", value_parser = args::counts)]
        nodes: args::List<usize>,
        /// Grid half-width; chosen from the model when omitted.
        #[arg(long = "L")]
        half_width: Option<f64>,
    },
    /// Mixed sets versus half-spaces in the warped-product model.
    Warped {
        #[command(flatten)]
        model: Model,
        /// Column mass.
        #[arg(long, default_value_t = 0.5)]
        theta: f64,
        /// Fiber fraction of the lower column's arc.
        #[arg(long, default_value_t = 0.5)]
        q1: f64,
        /// Bottom of the slab used for the horizontal term; defaults to r - 1.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        #[arg(long = "n-t", default_value_t = 400)]
        n_t: usize,
        #[arg(long = "n-fiber", default_value_t = 256)]
        n_fiber: usize,
        /// Dilation radius; the smallest admissible one when omitted.
        #[arg(long)]
        eps: Option<f64>,
        /// Fiber circumference.
        #[arg(long, default_value_t = std::f64::consts::TAU)]
        circumference: f64,
    },
    /// Compare finite-difference profile derivatives with closed forms.
    DerivativeCheck {
        #[command(flatten)]
        model: Model,
        #[arg(long, default_value = "0.2,0.5,0.8", value_parser = args::thetas)]
        thetas: args::List<f64>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("ISOPROFILE_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("ISOPROFILE_THREADS must be a positive integer, got '{value}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(message) = configure_threads() {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }
    match commands::run(cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::error_code(&err))
        }
    }
}
