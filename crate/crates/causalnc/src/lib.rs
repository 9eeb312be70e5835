//! File formats, subcommands and the self-test battery behind the
//! `causalnc` binary.

pub mod commands;
pub mod format;
pub mod selftest;

use std::io::Write;
use std::path::Path;

/// Default relative tolerance of the PSD test.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Exit code for a positive result.
pub const EXIT_POSITIVE: u8 = 0;
/// Exit code for a negative result.
pub const EXIT_NEGATIVE: u8 = 1;
/// Exit code for unreadable or invalid input.
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] causalnc_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// Rendered command result and its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub code: u8,
}

impl Outcome {
    pub fn new(body: String, positive: bool) -> Self {
        Self { body, code: if positive { EXIT_POSITIVE } else { EXIT_NEGATIVE } }
    }
}

/// Parse a tolerance override. Must be finite and positive.
pub fn parse_tol(s: &str) -> Result<f64, CliError> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(CliError::Input(format!("tolerance must be a positive finite number, got {s:?}"))),
    }
}

/// Write `body` to `path` through a temporary file in the same directory,
/// so readers never observe a partial file.
pub fn write_atomic(path: &Path, body: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(body.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}
