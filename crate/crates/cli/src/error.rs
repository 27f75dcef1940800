use std::path::PathBuf;

use microgrid_resilience::{CompareError, DocumentError, PatchError, SimError, ValidationIssue};
use thiserror::Error;

/// Process exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const INVALID: u8 = 1;
    pub const IO: u8 = 2;
    pub const ENGINE: u8 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("could not listen on {addr}: {source}")]
    Bind {
        addr: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown built-in `{0}`; expected one of: {1}")]
    UnknownBuiltin(String, &'static str),
    #[error("{source_name}: {error}")]
    Document { source_name: String, error: DocumentError },
    #[error("{0}")]
    Patch(#[from] PatchError),
    #[error("{0}")]
    Config(String),
    #[error("scenario is invalid")]
    Invalid(Vec<ValidationIssue>),
    #[error("{0}")]
    Engine(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Bind { .. } => exit::IO,
            CliError::UnknownBuiltin(..)
            | CliError::Document { .. }
            | CliError::Patch(_)
            | CliError::Config(_)
            | CliError::Invalid(_) => exit::INVALID,
            CliError::Engine(_) => exit::ENGINE,
        }
    }

    /// Validation issues carried by the error, one per offending field.
    pub fn issues(&self) -> &[ValidationIssue] {
        match self {
            CliError::Document {
                error: DocumentError::Invalid(issues),
                ..
            } => issues,
            CliError::Patch(PatchError::InvalidResult { issues, .. }) => issues,
            CliError::Invalid(issues) => issues,
            _ => &[],
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::InvalidConfig(msg) => CliError::Config(msg),
            SimError::InvalidScenario(issues) => CliError::Invalid(issues),
            other => CliError::Engine(other.to_string()),
        }
    }
}

impl From<CompareError> for CliError {
    fn from(e: CompareError) -> Self {
        match e {
            CompareError::Patch(p) => CliError::Patch(p),
            CompareError::Sim(s) => s.into(),
            CompareError::ZeroBaseline => CliError::Engine(e.to_string()),
        }
    }
}
