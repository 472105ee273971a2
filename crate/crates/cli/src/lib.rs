//! Library side of the `fractoda` command-line tool: one module per
//! subcommand plus the CSV and SVG writers they share.

pub mod analyze;
pub mod error;
pub mod format;
pub mod reproduce;
pub mod simulate;
pub mod svg;
pub mod sweep;

pub use error::{CliError, Result};

use std::path::Path;

use fractoda::config::ConfigMap;
use fractoda::RunConfig;

/// Reads a config file and applies `key=value` overrides in order.
pub fn load_run_config(path: &Path, overrides: &[String]) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut map = ConfigMap::parse(&text)?;
    for item in overrides {
        let Some((key, value)) = item.split_once('=') else {
            return Err(CliError::Usage(format!("override `{item}`: expected key=value")));
        };
        map.set(key.trim(), value.trim())?;
    }
    Ok(RunConfig::from_map(&map)?)
}
