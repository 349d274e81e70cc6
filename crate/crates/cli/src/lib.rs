//! Command-line front end: argument parsing, input ingestion, dispatch to
//! the model modules and report emission.

pub mod commands;
pub mod error;
pub mod ingest;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use error::{CliError, CliResult};
pub use report::{Format, Rendered};

/// Identified sets, minimum data-consistent relaxations and misspecification-robust bounds.
#[derive(Debug, Parser)]
#[command(name = "mrb", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub globals: Globals,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every command.
#[derive(Debug, Clone, Args)]
pub struct Globals {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for simulated quantities (recorded in the report).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Cross-check the closed forms against the brute-force oracles.
    #[arg(long, global = true)]
    pub oracle: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bounds from conditional means of observable lower and upper bounds on the outcome.
    Intersect(commands::intersect::IntersectArgs),
    /// Binary instrument, binary treatment and binary outcome.
    BinaryIv(commands::binary_iv::BinaryIvArgs),
    /// Adaptive monotone instrumental variables.
    Amiv(commands::amiv::AmivArgs),
    /// Minimal relaxations of a family of interval or box assumptions.
    Lattice(commands::lattice::LatticeArgs),
    /// Artstein inequalities for finite-outcome random-set models.
    Artstein(commands::artstein::ArtsteinArgs),
}

/// Runs the selected command and renders its report.
pub fn run(cli: &Cli) -> CliResult<Rendered> {
    let g = &cli.globals;
    match &cli.command {
        Command::Intersect(a) => commands::intersect::run(a, g),
        Command::BinaryIv(a) => commands::binary_iv::run(a, g),
        Command::Amiv(a) => commands::amiv::run(a, g),
        Command::Lattice(a) => commands::lattice::run(a, g),
        Command::Artstein(a) => commands::artstein::run(a, g),
    }
}
