//! Output helpers: every CSV goes through the csv crate (quoting per RFC
//! 4180), every summary through serde_json.

use std::path::{Path, PathBuf};

use crate::CliError;

pub fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>, CliError> {
    csv::Writer::from_path(path).map_err(Into::into)
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    std::fs::write(path, format!("{:#}\n", value))?;
    Ok(())
}

pub fn out_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}
