use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input data violates a structural invariant. `field` names the offending
    /// field, e.g. `weights[2]`.
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("knot insertion rejected: {0}")]
    Insertion(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Stable machine-readable identifier used in service error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Validation { .. } => "validation_error",
            Error::Domain(_) => "domain_error",
            Error::Degenerate(_) => "degenerate_input",
            Error::Insertion(_) => "insertion_rejected",
            Error::Parse { .. } => "parse_error",
            Error::Io { .. } => "io_error",
        }
    }

    /// The offending field, when the error is tied to one.
    pub fn field(&self) -> Option<&str> {
        match self {
            Error::Validation { field, .. } => Some(field),
            _ => None,
        }
    }
}
