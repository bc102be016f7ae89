pub mod constraints;
pub mod pdfv;
pub mod potential;
pub mod spectrum;
pub mod verify;

use clap::Args;
use std::path::PathBuf;

use crate::{CliError, CliResult};

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// sech amplitude of the gauge profile
    #[arg(long)]
    pub a: Option<f64>,
    /// inverse width of the hyperbolic profiles
    #[arg(long)]
    pub mu: Option<f64>,
    /// longitudinal wavenumber (absorbed by the gauge constant where noted)
    #[arg(long)]
    pub k: Option<f64>,
    /// grid half-width
    #[arg(long = "grid-l")]
    pub grid_l: Option<f64>,
    /// grid point count
    #[arg(long = "grid-n")]
    pub grid_n: Option<usize>,
    /// output path (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// output format: csv for data commands, report for verify
    #[arg(long)]
    pub format: Option<String>,
    /// TOML configuration file; explicit flags win
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn require_format(resolved: &str, allowed: &str) -> CliResult<()> {
    if resolved != allowed {
        return Err(CliError::Usage(format!(
            "this command only writes format={allowed}, got format={resolved}"
        )));
    }
    Ok(())
}
