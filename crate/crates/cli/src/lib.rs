//! Harness library behind the `strand-id` binary.
//!
//! The binary is a thin argument parser; everything it does — config
//! parsing, grid sweeps, threshold tables, figure data, exhaustive
//! self-checks, CSV emission — lives here so the acceptance suite can drive
//! the same code paths in-process.

pub mod config;
pub mod csv;
pub mod exhaustive;
pub mod figures;
pub mod sweep;
pub mod verify;

use std::io;
use std::path::PathBuf;

use thiserror::Error;

use config::ConfigError;

/// Top-level harness error.  Bound-check failures are *not* errors — modes
/// report them through their `Ok` value so the binary can exit 1 — and so
/// everything here maps to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration (parse or validation).
    #[error(transparent)]
    Config(#[from] ConfigError),
    /// Filesystem failure reading a config or writing an output.
    #[error("{}: {source}", path.display())]
    Io {
        /// File being read or written.
        path: PathBuf,
        /// Underlying error.
        source: io::Error,
    },
}
