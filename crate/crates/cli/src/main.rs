//! `belldisc`: check the beam-splitter identities, simulate circuits and run
//! the Bell-state discrimination search from the command line.
//!
//! Exit codes: 0 success, 1 a verify claim failed, 2 usage or validation
//! error, 3 I/O error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "belldisc", version, about = "Two-photon linear-optics simulator and Bell-state discrimination search")]
struct Cli {
    /// Machine-readable JSON output for `verify`.
    #[arg(long, global = true)]
    json: bool,

    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads for `search` (0 = one per core).
    #[arg(long, global = true, env = "BELLDISC_WORKERS", default_value_t = 0)]
    workers: usize,

    /// Reserved for sampling features; recorded in reports.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct DetectorArgs {
    /// Detectors do not resolve polarization.
    #[arg(long)]
    no_polarization: bool,

    /// Threshold (click/no-click) detectors instead of photon-number resolving ones.
    #[arg(long)]
    threshold: bool,

    /// Spatial modes with detectors, e.g. `1,2` (default: every mode of the circuit).
    #[arg(long, value_delimiter = ',', value_name = "MODES")]
    monitor: Vec<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every operator identity and split/bunch statement; one PASS/FAIL line each.
    Verify {
        /// Use the literal (uncalibrated) PNP V-block signs; the PNP claims should fail.
        #[arg(long, hide = true)]
        flip_pnp_signs: bool,
    },
    /// Evolve one input state through a circuit and report amplitudes and outcomes.
    Simulate {
        /// Circuit JSON file.
        circuit: PathBuf,
        /// Bell state to inject: psi-, psi+, phi-, phi+.
        #[arg(long, conflicts_with = "state_file", required_unless_present = "state_file")]
        state: Option<String>,
        /// JSON file with an explicit term list.
        #[arg(long, value_name = "PATH")]
        state_file: Option<PathBuf>,
        /// Spatial modes carrying the Bell-state photons.
        #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [1, 2])]
        input_modes: Vec<usize>,
        #[command(flatten)]
        detectors: DetectorArgs,
    },
    /// Score how well a circuit and detector setup discriminates the four Bell states.
    Discriminate {
        circuit: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [1, 2])]
        input_modes: Vec<usize>,
        #[command(flatten)]
        detectors: DetectorArgs,
    },
    /// Exhaustively search a circuit family (default: the built-in desk-scale family).
    Search {
        /// Search-space JSON file.
        space: Option<PathBuf>,
    },
    /// Split a bunched pair on a chain of fresh beam splitters.
    Cascade {
        /// Bunched input in mode 1: hv, hh, vv, phi-, phi+.
        #[arg(long, default_value = "hv", conflicts_with = "state_file")]
        initial: String,
        /// JSON file with an explicit bunched term list.
        #[arg(long, value_name = "PATH")]
        state_file: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        stages: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
