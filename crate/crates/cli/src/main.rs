mod args;
mod commands;
mod fft;
mod output;
mod validate;

use std::fmt;
use std::io;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Exit status 1: a validation suite failed.
const EXIT_VALIDATION: u8 = 1;
/// Exit status 2: bad arguments or parameters (clap uses 2 as well).
const EXIT_USAGE: u8 = 2;
/// Exit status 3: requested times run past the no-wrap horizon.
const EXIT_HORIZON: u8 = 3;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Horizon(String),
    Io(io::Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) | Failure::Horizon(msg) => f.write_str(msg),
            Failure::Io(e) => write!(f, "write failed: {e}"),
        }
    }
}

impl From<ringtransfer_core::Error> for Failure {
    fn from(e: ringtransfer_core::Error) -> Self {
        match e {
            ringtransfer_core::Error::HorizonExceeded { .. } => {
                Failure::Horizon(format!("{e}; pass --allow-wrap to override"))
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn validate(args: &args::ValidateArgs) -> ExitCode {
    let results = validate::run_all(args.inject_sign_flip);
    if args.json {
        println!("{}", validate::to_json(&results));
    } else {
        for r in &results {
            let status = if r.passed { "PASS" } else { "FAIL" };
            println!("{status} {}: {}", r.name, r.detail);
        }
    }
    if results.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VALIDATION)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Profile(a) => commands::profile(a),
        Command::Fidelity(a) => commands::fidelity(a),
        Command::Maxcurve(a) => commands::maxcurve(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Validate(a) => return validate(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ringtransfer: {e}");
            ExitCode::from(match e {
                Failure::Horizon(_) => EXIT_HORIZON,
                Failure::Usage(_) | Failure::Io(_) => EXIT_USAGE,
            })
        }
    }
}
