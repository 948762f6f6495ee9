//! `topocircuit` — reproducible experiments on digitally simulated Floquet
//! topological matter.
//!
//! Angles are given in units of π. Results are JSON (or CSV for grids and
//! series) with an embedded provenance block; `--replay FILE` re-runs the
//! recorded command. Failures print a JSON error record to stderr and exit
//! with 2 (usage) or 1 (numerical guard or I/O).

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use commands::*;

#[derive(Parser, Debug)]
#[command(name = "topocircuit", version, about = "Floquet topological quantum circuits", args_override_self = true)]
pub struct Cli {
    /// Worker threads for sweeps and trajectories.
    #[arg(long, global = true, env = "TOPOCIRCUIT_THREADS")]
    threads: Option<usize>,
    /// Re-run the command recorded in an output file's provenance block.
    #[arg(long, value_name = "FILE")]
    replay: Option<PathBuf>,
    /// Output file; results go to stdout when omitted.
    #[arg(short, long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify the eight-gate realization of the composite gate.
    CheckU(CheckUArgs),
    /// Propagate one excitation through the 1D circuit.
    #[command(name = "simulate-1d")]
    Simulate1d(Simulate1dArgs),
    /// Propagate one excitation through the 2D circuit.
    #[command(name = "simulate-2d")]
    Simulate2d(Simulate2dArgs),
    /// Winding numbers (ν₀, ν_π) of the 1D cycle.
    #[command(name = "winding-1d")]
    Winding1d(Winding1dArgs),
    /// Floquet winding numbers (W₀, W_π) of the 2D cycle.
    #[command(name = "winding-2d")]
    Winding2d(Winding2dArgs),
    /// Invariants over a grid of angles.
    PhaseDiagram(PhaseDiagramArgs),
    /// Mean-displacement detection of the 1D invariants.
    MeanDisplacement(MeanDisplacementArgs),
    /// Closed-form edge states and their eigenstate residuals.
    EdgeState(EdgeStateArgs),
    /// Monte-Carlo noisy run of the 1D circuit.
    NoisyRun(NoisyRunArgs),
    /// Write the circuit as OpenQASM 2.0 or Quil.
    Export(ExportArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckU(_) => "check-u",
            Command::Simulate1d(_) => "simulate-1d",
            Command::Simulate2d(_) => "simulate-2d",
            Command::Winding1d(_) => "winding-1d",
            Command::Winding2d(_) => "winding-2d",
            Command::PhaseDiagram(_) => "phase-diagram",
            Command::MeanDisplacement(_) => "mean-displacement",
            Command::EdgeState(_) => "edge-state",
            Command::NoisyRun(_) => "noisy-run",
            Command::Export(_) => "export",
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    match output::run(argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => output::report(e),
    }
}

pub(crate) fn dispatch(cli: Cli, recorded: Vec<String>) -> Result<()> {
    let command = cli.command.ok_or_else(|| output::usage("a subcommand or --replay is required"))?;
    let ctx = output::Context::new(command.name(), recorded, cli.output);
    match command {
        Command::CheckU(a) => check_u(&ctx, a),
        Command::Simulate1d(a) => simulate_1d(&ctx, a),
        Command::Simulate2d(a) => simulate_2d(&ctx, a),
        Command::Winding1d(a) => winding_1d(&ctx, a),
        Command::Winding2d(a) => winding_2d(&ctx, a),
        Command::PhaseDiagram(a) => phase_diagram(&ctx, a),
        Command::MeanDisplacement(a) => mean_displacement(&ctx, a),
        Command::EdgeState(a) => edge_state(&ctx, a),
        Command::NoisyRun(a) => noisy_run(&ctx, a),
        Command::Export(a) => export(&ctx, a),
    }
}
