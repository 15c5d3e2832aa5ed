//! Batch front end for the mvjump library: loads a scenario config, runs
//! one analysis, and emits a text report or CSV for external plotting.
//!
//! Exit codes: 0 success, 1 usage or config error, 2 model-domain error,
//! 3 verification failure.

mod commands;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mvjump::config::{load_config, ParsedConfig};
use mvjump::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "mvjump",
    version,
    about = "Closed-form and Monte Carlo analysis of joint investment and \
             per-claim insurance under mean-variance preferences",
    after_help = "Figure-style sweeps:\n  \
        mvjump sweep --param rho --min -0.95 --max 0.95 --count 39 --thetas 1,2,5,10\n  \
        mvjump sweep --param lambda --min 0 --max 0.2 --count 41 \
        --premium expected-value --loading 0.4"
)]
struct Cli {
    /// Scenario file (`key = value`); the built-in baseline calibration
    /// when omitted
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Write the primary output to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Simulation seed override
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print derived coefficients and the closed-form controls of each
    /// policy family
    Strategy(commands::StrategyArgs),
    /// Emit efficient-frontier points as CSV
    Frontier(commands::FrontierArgs),
    /// Sweep one parameter and emit the optimal controls as CSV
    Sweep(commands::SweepArgs),
    /// Simulate a policy and report estimates against their closed forms
    Simulate(commands::SimulateArgs),
    /// Run every verification check against the scenario
    Verify(commands::VerifyArgs),
    /// Side-by-side comparison of the precommitment and equilibrium
    /// solutions
    Compare(commands::CompareArgs),
}

fn exit_class(err: &Error) -> u8 {
    match err {
        Error::Config { .. } | Error::ConfigLine { .. } | Error::Io(_) => EXIT_USAGE,
        Error::Domain(_)
        | Error::DegenerateModel { .. }
        | Error::Unsupported(_)
        | Error::InsufficientSamples { .. } => EXIT_DOMAIN,
    }
}

fn run(cli: Cli) -> mvjump::Result<u8> {
    let (config, label) = match &cli.config {
        Some(path) => (load_config(path)?, path.display().to_string()),
        None => (ParsedConfig::baseline(), "built-in baseline".to_string()),
    };

    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    };

    let code: u8 = match &cli.command {
        Command::Strategy(args) => {
            commands::strategy(&mut out, &config, &label, args)?;
            0
        }
        Command::Frontier(args) => {
            commands::frontier(&mut out, &config, args)?;
            0
        }
        Command::Sweep(args) => {
            commands::sweep(&mut out, &config, args)?;
            0
        }
        Command::Simulate(args) => {
            commands::simulate(&mut out, &config, &label, cli.seed, args)?;
            0
        }
        Command::Verify(args) => {
            if commands::verify(&mut out, &config, &label, args)? {
                0
            } else {
                EXIT_VERIFY
            }
        }
        Command::Compare(args) => {
            commands::compare(&mut out, &config, args)?;
            0
        }
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version arrive as "errors" but are successes.
            let code = if err.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_class(&err))
        }
    }
}
