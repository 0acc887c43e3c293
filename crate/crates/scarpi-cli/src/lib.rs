//! Command-line front end for [`scarpi`].
//!
//! [`run`] executes a parsed [`RunConfig`] against two sinks: data rows go
//! to `out` (or the `--out` file), everything else to `diag`. The return
//! value is the process exit status: 0 on success, 1 for usage and
//! validation errors, 2 for numerical failures.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::Parser;
use scarpi::laplace::LaplaceError;
use scarpi::scarpi_ops::OpsError;
use scarpi::solver::SolverError;
use scarpi::special::SpecialError;
use thiserror::Error;

mod commands;
mod config;
mod output;

pub use config::{
    CheckArgs, Command, GridArgs, InvertArgs, KernelsArgs, Kind, MethodChoice, MlArgs, OutputArgs,
    OutputFormat, ProblemArgs, QuadratureArgs, RunConfig, SolveArgs, Spacing, TalbotArgs,
    Transform, TransitionArgs,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::InvalidProblem(_) | SolverError::InvalidConfig(_) => {
                CliError::Validation(e.to_string())
            }
            e => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<SpecialError> for CliError {
    fn from(e: SpecialError) -> Self {
        match e {
            SpecialError::InvalidOrder(_) | SpecialError::NonFiniteArgument(_) => {
                CliError::Validation(e.to_string())
            }
            e => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<LaplaceError> for CliError {
    fn from(e: LaplaceError) -> Self {
        match e {
            LaplaceError::NonFinite { .. } => CliError::Numerical(e.to_string()),
            e => CliError::Validation(e.to_string()),
        }
    }
}

impl From<OpsError> for CliError {
    fn from(e: OpsError) -> Self {
        match e {
            OpsError::Laplace(e) => e.into(),
            e => CliError::Validation(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(io::Error::other(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

/// Runs one subcommand and returns its exit status.
pub fn run(config: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> u8 {
    let result = match &config.subcommand {
        Command::Solve(args) => {
            with_sink(&args.output, out, |sink| commands::solve(args, sink, diag))
        }
        Command::Kernels(args) => with_sink(&args.output, out, |sink| {
            commands::kernels(args, sink, diag)
        }),
        Command::Check(args) => {
            with_sink(&args.output, out, |sink| commands::check(args, sink, diag))
        }
        Command::Ml(args) => with_sink(&args.output, out, |sink| commands::ml(args, sink, diag)),
        Command::Invert(args) => {
            with_sink(&args.output, out, |sink| commands::invert(args, sink, diag))
        }
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(diag, "error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (program name first) and runs the result. Help and
/// version requests print to `out` and exit 0; parse errors exit 1.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write, diag: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config, out, diag),
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(diag, "{}", e.render());
                1
            } else {
                let _ = write!(out, "{}", e.render());
                0
            }
        }
    }
}

fn with_sink<F>(args: &OutputArgs, out: &mut dyn Write, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    match &args.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            let result = body(&mut file);
            file.flush()?;
            result
        }
        None => {
            let result = body(out);
            out.flush()?;
            result
        }
    }
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book {}
