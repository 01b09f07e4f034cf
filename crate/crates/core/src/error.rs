use std::fmt;

use crate::construction::Violation;
use crate::resolution::ResolutionViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid block {block:?}: {reason}")]
    InvalidBlock { block: Vec<u64>, reason: String },

    #[error("resolution check failed: {0}")]
    Resolution(#[from] ResolutionViolation),

    #[error("construction spec rejected: {}", ViolationList(.0))]
    Validation(Vec<Violation>),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParameters(msg.into())
    }

    /// Stable, machine-readable category name.
    pub fn category(&self) -> &'static str {
        match self {
            Error::InvalidParameters(_) => "invalid-parameters",
            Error::InvalidBlock { .. } => "invalid-block",
            Error::Resolution(_) => "resolution",
            Error::Validation(_) => "validation",
            Error::Verification(_) => "verification",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "parse",
        }
    }
}

struct ViolationList<'a>(&'a [Violation]);

impl fmt::Display for ViolationList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, v) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
