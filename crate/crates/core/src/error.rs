use thiserror::Error;

/// Errors raised by any stage of the pipeline.
///
/// The variants are coarse on purpose: the command-line front end maps each
/// of them onto a process exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("value out of range: {0}")]
    Range(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid coalition structure: {0}")]
    InvalidStructure(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable tag for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Range(_) => "range",
            Error::Config(_) => "config",
            Error::Parse { .. } => "parse",
            Error::Schema(_) => "schema",
            Error::InvalidStructure(_) => "invalid-structure",
            Error::Dimension { .. } => "dimension",
            Error::Infeasible(_) => "infeasible",
            Error::ResourceLimit(_) => "resource-limit",
            Error::Io(_) => "io",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        if err.is_data() {
            Error::Schema(err.to_string())
        } else {
            Error::Parse {
                line: err.line(),
                column: err.column(),
                message: err.to_string(),
            }
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
