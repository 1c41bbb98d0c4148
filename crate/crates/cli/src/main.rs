//! `kaya-lmdi` command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 data validation or I/O, 3 domain error.

use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;

use args::{Cli, Command};

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(kaya_lmdi::Error),
}

impl From<kaya_lmdi::Error> for CliError {
    fn from(e: kaya_lmdi::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use kaya_lmdi::ErrorKind;
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Config => 1,
                ErrorKind::Input | ErrorKind::Io => 2,
                ErrorKind::Domain => 3,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Validate(a) => commands::validate(a),
        Command::Decompose(a) => commands::decompose(a),
        Command::Chart(a) => commands::chart(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
