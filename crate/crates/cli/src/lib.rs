//! Command-line front end for `binext`: an instance grammar, subcommands over the
//! core library, and scripted reproductions that print `RESULT`/`CHECK` reports.

pub mod commands;
pub mod expr;
pub mod instance;
pub mod report;
pub mod scenarios;

use std::ffi::OsString;

use binext::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Capacity { .. }) => 3,
            _ => 2,
        }
    }
}

/// Runs the CLI and returns the process exit code: 0 if every check passed,
/// 1 if some check failed, 2 on usage or input errors, 3 when a capacity limit is hit.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    commands::run_to(args, &mut out, &mut err)
}
