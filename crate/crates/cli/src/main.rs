//! `ptscarf`: batch front end for the toolkit. Data commands emit CSV,
//! `verify` emits a structured-text report; identical configuration always
//! produces byte-identical output.
//!
//! Exit codes: 0 success, 1 verification failure (report still written),
//! 2 usage or configuration error, 3 numeric failure.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ptscarf",
    version,
    about = "Hyperbolic-profile non-Hermitian models: potentials, closed-form spectra, \
             intertwining constraints, velocity-deformed effective potentials, and a \
             cross-checking verification suite"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a potential profile to CSV
    Potential(commands::potential::PotentialArgs),
    /// Closed-form bound levels, optionally cross-checked against the eigensolver
    Spectrum(commands::spectrum::SpectrumArgs),
    /// Solve the intertwining constraint system and list the potential family
    Constraints(commands::constraints::ConstraintsArgs),
    /// Velocity-deformed effective potentials, full and simplified side by side
    Pdfv(commands::pdfv::PdfvArgs),
    /// Run the verification suite and write a pass/fail report
    Verify(commands::verify::VerifyArgs),
}

#[derive(Debug)]
pub enum CliError {
    /// exit 2
    Usage(String),
    /// exit 3
    Numeric(String),
    /// exit 1; the report has already been written
    ChecksFailed,
}

pub type CliResult<T> = Result<T, CliError>;

impl From<ptscarf::Error> for CliError {
    fn from(e: ptscarf::Error) -> Self {
        use ptscarf::Error as E;
        match e {
            E::InvalidModel(_)
            | E::UnsupportedProfile(_)
            | E::UnsupportedDegree { .. }
            | E::GridTooShort { .. }
            | E::AsymmetricGrid(_)
            | E::BranchRejected { .. }
            | E::SingularVelocity(_)
            | E::DomainTooSmall { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("io: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Potential(args) => commands::potential::run(args),
        Command::Spectrum(args) => commands::spectrum::run(args),
        Command::Constraints(args) => commands::constraints::run(args),
        Command::Pdfv(args) => commands::pdfv::run(args),
        Command::Verify(args) => commands::verify::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::ChecksFailed) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
