//! Subcommand implementations.

pub mod augment_cmd;
pub mod bench;
pub mod evaluate;
pub mod features;
pub mod predict;
pub mod segment;
pub mod train;

use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Ensure the output directory exists and resolve a file inside it.
pub fn out_file(out_dir: &Path, name: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::data(format!("cannot create {}: {e}", out_dir.display())))?;
    Ok(out_dir.join(name))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
}

pub fn file_stem(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("image")
        .to_string()
}
