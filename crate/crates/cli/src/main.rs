mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "pilesway",
    version,
    about = "Reference-free pile displacement estimation from paired two-axis accelerometers"
)]
pub struct Cli {
    /// JSON run configuration; builtin defaults apply when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Directory for output files (default: current directory).
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    /// Override the event seed (simulate) or re-seed the whole catalog (bench).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Legacy processing variant: causal moving average, unconditioned
    /// filter input, signed peak errors.
    #[arg(long, global = true)]
    strict_paper: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic crossing event from a builtin id or a spec JSON file
    Simulate {
        /// Builtin event id (train1..train10) or path to a spec JSON file
        spec: String,
    },
    /// Estimate displacements for a recorded event CSV
    Estimate {
        /// Event CSV (time,ax_top,ay_top,ax_bot,ay_bot[,lvdt])
        event: PathBuf,
    },
    /// Score one displacement CSV against another
    Compare {
        /// Estimated displacement CSV
        estimated: PathBuf,
        /// Measured/reference displacement CSV
        measured: PathBuf,
        /// Column to read from the estimated file (required when it holds
        /// more than one value column)
        #[arg(long)]
        est_column: Option<String>,
        /// Column to read from the measured file
        #[arg(long)]
        meas_column: Option<String>,
    },
    /// Run the builtin 10-event catalog end to end and write a score report
    Bench,
    /// Print the regularization factor for an N-point filter window
    Lambda { n: usize },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code().clamp(1, 255) as u8)
        }
    }
}
