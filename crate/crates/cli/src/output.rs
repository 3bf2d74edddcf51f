//! CSV writing with a fixed number format.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::CliError;

/// 17 significant digits in scientific notation; `-0` is written as `0`.
pub fn fmt_f64(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

/// Accumulates rows and writes them with LF line endings.
#[derive(Debug, Clone)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, fields: &[String]) {
        let _ = writeln!(self.text, "{}", fields.join(","));
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn write(&self, dir: &Path, name: &str) -> Result<PathBuf, CliError> {
        write_file(dir, name, &self.text)
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    ensure_dir(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}
