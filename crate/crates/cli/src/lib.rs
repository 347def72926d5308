//! Front end for the `meandim` binary: configs, presets, command runners and report emission.

pub mod args;
pub mod config;
pub mod error;
pub mod report;
pub mod run;

use std::io::Write;
use std::path::Path;

use crate::config::RunConfig;
use crate::error::CliError;

/// Writes the report to its configured destination. Files are written whole
/// through a temporary sibling, so a failed run leaves no partial output.
pub fn write_output(cfg: &RunConfig, bytes: &[u8]) -> Result<(), CliError> {
    match &cfg.output.path {
        Some(path) => {
            let tmp = path.with_extension("partial");
            std::fs::write(&tmp, bytes).map_err(|e| CliError::io(tmp.display(), e))?;
            std::fs::rename(&tmp, path).map_err(|e| CliError::io(Path::new(path).display(), e))
        }
        None => std::io::stdout().write_all(bytes).map_err(|e| CliError::io("stdout", e)),
    }
}
