//! Implementation of the `aps` binary: argument definitions, the three
//! subcommands, and the file formats they emit.

pub mod args;
pub mod commands;
pub mod output;

use clap::Parser;
use std::process::ExitCode;

/// Error split that drives the exit code: 2 for bad input, 1 for anything
/// unexpected.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(anyhow::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.into())
    }
}

pub fn main_impl() -> ExitCode {
    let cli = args::Cli::parse();
    let result = match cli.command {
        args::Command::Grover(a) => commands::cmd_grover(a),
        args::Command::Aps(a) => commands::cmd_aps(a),
        args::Command::EigenScan(a) => commands::cmd_eigen_scan(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
