use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("point does not belong to space: {0}")]
    Mismatch(String),

    #[error("angle undefined at the cone vertex (space of directions is a circle of length {link_length})")]
    ApexAtVertex { link_length: f64 },

    #[error("minimizing geodesic is not unique: {0}")]
    AmbiguousGeodesic(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("invalid loop: {0}")]
    InvalidLoop(String),

    #[error("usage error at `{path}`: {message}")]
    Usage { path: String, message: String },

    #[error("serialization error: {0}")]
    Serialization(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Usage {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
