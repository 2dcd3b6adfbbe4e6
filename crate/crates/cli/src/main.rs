//! `advect`: run advection experiments and emit plot-ready CSV.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Failure;
use crate::config::{Command, Flags, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "advect",
    version,
    about = "Long-time linear advection experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evolve one scheme and write error, profile and state CSVs
    Run(Flags),
    /// Eigenvalues of a linear scheme's circulant update matrix
    Spectrum(Flags),
    /// Error records over a grid of (m, t_f) pairs
    Sweep(Flags),
    /// Decaying eigenmode of a forced jet branch pattern
    Counterexample(Flags),
    /// Maximum of the solution over time for several schemes
    Maxtrack(Flags),
    /// Return-period fixed-point analysis of a jet initialization
    Fixedpoint(Flags),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = match cli.command {
        Cmd::Run(f) => (Command::Run, f),
        Cmd::Spectrum(f) => (Command::Spectrum, f),
        Cmd::Sweep(f) => (Command::Sweep, f),
        Cmd::Counterexample(f) => (Command::Counterexample, f),
        Cmd::Maxtrack(f) => (Command::Maxtrack, f),
        Cmd::Fixedpoint(f) => (Command::Fixedpoint, f),
    };
    let cfg = match RunConfig::resolve(command, &flags) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match commands::dispatch(&cfg) {
        Ok(()) | Err(Failure::Closed) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
