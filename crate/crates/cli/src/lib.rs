//! Train, generate and inspect from the command line.

pub mod config;
pub mod inspect;
pub mod pipeline;

use thiserror::Error;

pub use config::RunConfig;
pub use pipeline::{generate, train, Manifest};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("artifacts were trained under config hash {found}, this config hashes to {expected}; retrain")]
    ManifestMismatch { expected: String, found: String },
}

impl CliError {
    /// 1 for usage errors, 2 for data and manifest errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::ManifestMismatch { .. } => 2,
        }
    }
}
