pub mod audit;
pub mod brane;
pub mod sweep;
pub mod validate;

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Files written by a command together with its summary text.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub path: PathBuf,
    pub csv: String,
    pub summary: String,
}

pub(crate) fn write_output(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let io_err = |source| CliError::Output { path: path.clone(), source };
    fs::create_dir_all(dir).map_err(io_err)?;
    fs::write(&path, contents).map_err(io_err)?;
    Ok(path)
}
