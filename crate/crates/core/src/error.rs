use thiserror::Error;

/// Errors raised by the workbench.
///
/// Law violations and failed checks are never errors; they are recorded in a
/// [`Report`](crate::report::Report).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("unknown {kind} `{name}`")]
    Lookup { kind: &'static str, name: String },

    #[error("type error: {0}")]
    Type(String),

    #[error("bound `{bound}` exceeded (limit {limit}): {detail}")]
    Resource {
        bound: &'static str,
        limit: usize,
        detail: String,
    },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("size guard violated: {0}")]
    Guard(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn lookup(kind: &'static str, name: impl Into<String>) -> Self {
        Error::Lookup {
            kind,
            name: name.into(),
        }
    }

    pub(crate) fn resource(bound: &'static str, limit: usize, detail: impl Into<String>) -> Self {
        Error::Resource {
            bound,
            limit,
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
