//! Optional TOML configuration file. Every key mirrors a command-line flag;
//! explicit flags always win over file values, file values win over the
//! built-in defaults.

use serde::Deserialize;
use std::path::{Path, PathBuf};

use crate::{CliError, CliResult};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub a: Option<f64>,
    pub mu: Option<f64>,
    pub k: Option<f64>,
    pub branch: Option<String>,
    pub nmax: Option<i64>,
    pub grid_l: Option<f64>,
    pub grid_n: Option<usize>,
    pub imaginary_vf: Option<bool>,
    pub include_marginal: Option<bool>,
    pub verify_inline: Option<bool>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub select: Option<String>,
    pub member: Option<String>,
    pub kind: Option<String>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub which: Option<u8>,
    pub constraint_set: Option<u8>,
    pub perturb_b1: Option<f64>,
}

pub fn load(path: Option<&Path>) -> CliResult<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

/// flag > file > default
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
