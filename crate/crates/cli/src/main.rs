//! `slicekit` command-line interface.
//!
//! Exit codes: 0 success, 1 failed check, 2 usage or parse error, 3 domain error.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "slicekit", version, about = "Slice regular functions: monodromy, representation formula, star products, stem systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format (CSV is available for monodromy tables and check reports).
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Seed for all random sampling.
    #[arg(long, env = "SLICEKIT_SEED", default_value_t = 0, global = true)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Sqrt,
    Log,
    Poly,
}

/// Function model and the path it is continued along.
#[derive(Debug, clap::Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Sqrt)]
    pub model: ModelKind,

    /// Polynomial coefficients file ({"coeffs": [[w,x,y,z], ...]}), for --model poly.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,

    /// Path file ({"segments": [...]}); defaults to the out-and-back loop around 0.
    #[arg(long)]
    pub path: Option<PathBuf>,

    /// Real starting point of the path.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub x0: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Continue a function along a lifted path and report its value and germ.
    Monodromy {
        #[command(flatten)]
        model: ModelArgs,

        /// One unit per part, e.g. "[1,0,0];[0,1,0]" or "i;j".
        #[arg(long)]
        units: String,

        /// Expected value [w,x,y,z]; the run fails when the deviation exceeds --tol.
        #[arg(long)]
        expect: Option<String>,

        #[arg(long, default_value_t = 1e-9)]
        tol: f64,

        /// Rows of the CSV table.
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
    /// Representation vector of a function along a path.
    Repformula {
        #[command(flatten)]
        model: ModelArgs,

        /// Unit matrix file ({"N": n, "rows": [...]}); defaults to the sign pattern of i.
        #[arg(long = "J", value_name = "FILE")]
        units_matrix: Option<PathBuf>,

        /// Units at which to evaluate the formula.
        #[arg(long)]
        units: Option<String>,
    },
    /// Star product of two polynomials.
    Starprod {
        /// Left factor ({"coeffs": [...]}).
        #[arg(long)]
        coeffs: PathBuf,

        /// Right factor ({"coeffs": [...]}).
        #[arg(long)]
        right: PathBuf,

        /// Point [w,x,y,z] at which to evaluate the product.
        #[arg(long)]
        at: Option<String>,
    },
    /// Build a stem system for a function, or validate a stem system file.
    Stem {
        #[command(flatten)]
        model: ModelArgs,

        /// Stem system file to read instead of building one.
        #[arg(long)]
        input: Option<PathBuf>,

        /// Run the validator and report its four conditions.
        #[arg(long)]
        validate: bool,

        /// Largest disk radius.
        #[arg(long, default_value_t = 0.5)]
        radius: f64,

        /// Truncation lattice size.
        #[arg(long, default_value_t = 16)]
        lattice: usize,

        #[arg(long, default_value_t = 17)]
        radii: usize,

        #[arg(long, default_value_t = 64)]
        angles: usize,
    },
    /// Run verification suites.
    Check {
        /// unitarity, repformula, star, ring, series, stem or all.
        #[arg(default_value = "all")]
        suite: String,

        /// Override every tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
