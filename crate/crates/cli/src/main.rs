//! `cosserat`: essential spectra, cone regions, finite element eigenvalues
//! and analytic bounds for the Cosserat operator.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;
mod parse;
mod svg;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{BoundsArgs, ConeArgs, FemArgs, IntervalArgs, Scan2dArgs};

#[derive(Debug, Parser)]
#[command(
    name = "cosserat",
    version,
    about = "Cosserat spectrum and inf-sup constant computations"
)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "COSSERAT_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Essential-spectrum interval and LBB upper bound of corners.
    Interval(IntervalArgs),
    /// Roots of the plane corner symbol over an (omega, sigma) grid.
    Scan2d(Scan2dArgs),
    /// Critical-line roots of the axisymmetric cone symbol over a grid.
    Cone(ConeArgs),
    /// Discrete Cosserat eigenvalues on rectangles and cuboids.
    Fem(FemArgs),
    /// Analytic lower and upper bounds against the aspect parameter.
    Bounds(BoundsArgs),
}

/// Failure classes with their exit codes.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    NonConvergence(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::NonConvergence(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<cosserat_core::Error> for CliError {
    fn from(e: cosserat_core::Error) -> Self {
        use cosserat_core::Error as E;
        match e {
            E::SeriesNonConvergence(_)
            | E::ContourHitsZero
            | E::Unresolved(_)
            | E::NonConvergence(_)
            | E::NotPositiveDefinite(_) => CliError::NonConvergence(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Validation("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    match cli.command {
        Command::Interval(a) => commands::interval(a),
        Command::Scan2d(a) => commands::scan2d(a),
        Command::Cone(a) => commands::cone(a),
        Command::Fem(a) => commands::fem(a),
        Command::Bounds(a) => commands::bounds(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
