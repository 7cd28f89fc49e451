//! Command-line driver: builds machines from JSON descriptions, emits measure
//! traces as CSV, checks ML tests and machine invariants.

pub mod commands;
pub mod concordance;
pub mod config;
pub mod error;
pub mod output;
pub mod schema;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "omegaforge", version, about)]
pub struct Cli {
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cylinder depth L.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Construction stage.
    #[arg(long, global = true)]
    pub stage: Option<u32>,
    /// Argument horizon.
    #[arg(long, global = true)]
    pub nmax: Option<u128>,
    /// Worker threads for depth enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the configured machine and write its artifact.
    Build,
    /// Emit measure bounds along a schedule as CSV.
    Trace {
        /// Artifact written by `build`.
        machine: PathBuf,
        /// Outcome class, e.g. TOT or DOM-infsd.
        #[arg(long)]
        tag: String,
        /// Points of the default schedule ending at (--depth, --stage, --nmax).
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
    /// Build and verify an ML test.
    Mltest {
        /// ML-test input (JSON).
        input: PathBuf,
    },
    /// Run the invariant suite for the artifact's machine model.
    VerifyMachine {
        machine: PathBuf,
    },
    /// Print the table linking results to constructions and commands.
    Concordance,
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Build => commands::build(cli),
        Command::Trace {
            machine,
            tag,
            points,
        } => commands::trace(cli, machine, tag, *points),
        Command::Mltest { input } => commands::mltest(cli, input),
        Command::VerifyMachine { machine } => commands::verify_machine(cli, machine),
        Command::Concordance => output::emit(cli.out.as_deref(), &concordance::render()),
    }
}
