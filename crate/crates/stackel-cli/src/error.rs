use std::path::Path;

use angular_spectrum::AngularError;
use inverse_verify::VerifyError;
use radial_scatter::RadialError;
use serde::Serialize;
use stackel_core::StackelError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Structure(#[from] StackelError),
    #[error(transparent)]
    Angular(#[from] AngularError),
    #[error(transparent)]
    Radial(#[from] RadialError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

#[derive(Serialize)]
struct Reason<'a> {
    error: &'a str,
    message: String,
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), message: e.to_string() }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Structure(_) => "structure",
            CliError::Angular(_) => "angular",
            CliError::Radial(_) => "radial",
            CliError::Verify(_) => "verify",
        }
    }

    /// One-line JSON `{"error": kind, "message": ...}` for stderr.
    pub fn reason(&self) -> String {
        serde_json::to_string(&Reason { error: self.kind(), message: self.to_string() }).expect("reason serializes")
    }
}
