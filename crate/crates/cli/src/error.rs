//! Errors of the command-line front end and their exit codes.

use std::path::PathBuf;

use thiserror::Error;

/// Exit code for a successful run on data-consistent input.
pub const EXIT_OK: i32 = 0;
/// Exit code for internal or numerical failures.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code when the full model is refuted (the report is still written).
pub const EXIT_REFUTED: i32 = 2;
/// Exit code for input, schema, cell and flag errors.
pub const EXIT_INGEST: i32 = 3;
/// Exit code for unsupported assumption combinations or violation patterns.
pub const EXIT_UNSUPPORTED: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    /// The input file cannot be read or does not match its schema.
    #[error("ingest error in {}: {message}", path.display())]
    Ingest { path: PathBuf, column: Option<String>, message: String },

    /// A conditioning cell is empty or below the minimum count.
    #[error("cell error in {}: cell `{label}` has {count} rows, fewer than the required {min}", path.display())]
    Cell { path: PathBuf, label: String, count: usize, min: usize },

    /// Command-line flags are missing or inconsistent.
    #[error("invalid flags: {0}")]
    Flags(String),

    /// The model has no closed form for the requested combination or pattern.
    #[error("{0}")]
    Unsupported(mrb_core::Error),

    /// A computation failed.
    #[error("{0}")]
    Model(mrb_core::Error),

    /// The report could not be written.
    #[error("cannot write report to {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Ingest { .. } | CliError::Cell { .. } | CliError::Flags(_) => EXIT_INGEST,
            CliError::Unsupported(_) => EXIT_UNSUPPORTED,
            CliError::Model(_) | CliError::Write { .. } => EXIT_FAILURE,
        }
    }

    /// Wraps a core error raised while building model inputs from `path`.
    pub fn from_input(path: &std::path::Path, e: mrb_core::Error) -> CliError {
        match e {
            mrb_core::Error::Cell { label, count, min } => {
                CliError::Cell { path: path.to_path_buf(), label, count, min }
            }
            other => CliError::Ingest { path: path.to_path_buf(), column: None, message: other.to_string() },
        }
    }
}

impl From<mrb_core::Error> for CliError {
    fn from(e: mrb_core::Error) -> Self {
        match e {
            mrb_core::Error::UnsupportedCombo { .. } | mrb_core::Error::UnsupportedPattern(_) => {
                CliError::Unsupported(e)
            }
            other => CliError::Model(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
