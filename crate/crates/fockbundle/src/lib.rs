//! Verification harness: suites of grid checks over the operator-valued
//! Hopf bundle, Veronese and spin constructions, with JSON/CSV/text reports
//! and parameter sweeps.

pub mod config;
pub mod report;
pub mod sampling;
pub mod suites;
pub mod sweep;

pub use config::{Format, Suite, SuiteConfig};
pub use report::{run, CheckRecord, Report};
pub use sweep::{sweep, Axis};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] fockbundle_core::Error),
    #[error(transparent)]
    Domain(#[from] fockbundle_core::DomainError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code: 2 for configuration errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 1,
        }
    }
}
