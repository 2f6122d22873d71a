//! `trunclap`: reproducible experiments for truncated-Laplacian equations.
//!
//! Exit codes: 0 when every assertion matched its expectation, 1 on a verification or module
//! failure, 2 on a usage error.

mod args;
mod commands;
mod expectations;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Bad flags or parameters, reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => commands::verify(&a),
        Command::Radial(a) => commands::radial(&a),
        Command::Eigenbound(a) => commands::eigenbound(&a),
        Command::Fd(a) => commands::fd(&a),
        Command::Catalog(a) => commands::catalog(&a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is::<UsageError>() => {
            eprintln!("usage error: {e:#}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
