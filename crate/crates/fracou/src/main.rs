use std::process::ExitCode;

use clap::Parser;

use fracou::cli::{self, Cli, Command};
use fracou::Error;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Kernel(args) => cli::run_kernel(args).map(|_| true),
        Command::Solve(args) => cli::run_solve(args).map(|_| true),
        Command::Simulate(args) => cli::run_simulate(args).map(|_| true),
        Command::Verify(args) => cli::run_verify(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                // usage-level problems mirror the argument-parser exit code
                Error::Parse(_) | Error::InvalidParameter(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
