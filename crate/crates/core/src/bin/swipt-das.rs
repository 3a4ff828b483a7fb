use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use swipt_das::cli;

/// SWIPT power splitting and NOMA power allocation in a distributed antenna cell.
///
/// The worker thread count can be set with the SWIPT_DAS_THREADS environment variable.
#[derive(Parser)]
#[command(version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo sweep over the total power; writes max-sum.csv, max-min.csv and run.json.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the closed-form solvers with the brute-force oracle.
    Validate {
        config: PathBuf,
        #[arg(long)]
        instances: usize,
    },
    /// Print parameters and solutions of one realization as JSON.
    Single {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        /// Force the CSI error variance to zero.
        #[arg(long)]
        perfect_csi: bool,
    },
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { cli::EXIT_USAGE as u8 } else { 0 });
        }
    };
    if let Err(msg) = cli::configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(cli::EXIT_USAGE as u8);
    }
    let code = match args.command {
        Command::Sweep { config, out } => cli::cmd_sweep(&config, &out),
        Command::Validate { config, instances } => cli::cmd_validate(&config, instances),
        Command::Single {
            config,
            seed,
            trial,
            perfect_csi,
        } => cli::cmd_single(&config, seed, trial, perfect_csi),
    };
    ExitCode::from(code as u8)
}
