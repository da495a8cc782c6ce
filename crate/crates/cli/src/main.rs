//! `kms-levels`: trace, count and verify eigenvalue level curves of the KMS
//! matrix from the command line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 I/O error.

mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<kms_levels::Error> for CliError {
    fn from(e: kms_levels::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Thresholds { n, level } => commands::thresholds(n, level),
        Command::Curve(args) => commands::curve(&args),
        Command::Spectrum { n, rho } => commands::spectrum(n, &rho),
        Command::Count { level, rho, samples } => commands::count(&level, &rho, samples),
        Command::Cubic(args) => commands::cubic(&args),
        Command::Verify {
            suite,
            out,
            reverse_orientation,
        } => commands::verify(suite, out, reverse_orientation),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("kms-levels: {e}");
            ExitCode::from(e.code())
        }
    }
}
