use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the toolkit can report. The variants map one-to-one onto
/// the CLI exit codes and the C status codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation (zero
    /// polynomial, degree too small, pole of a rational entry, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed model descriptor. `path` is a JSON pointer-like location.
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    /// The caller asked for something the object cannot do (parameter
    /// substitution on a numeric model, size guard exceeded, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// A computation finished but could not produce the requested object.
    #[error("compute error: {0}")]
    Compute(String),

    /// Iterative solver ran out of iterations.
    #[error("no convergence after {iterations} iterations (max residual {max_residual:e})")]
    NonConvergence {
        iterations: usize,
        max_residual: f64,
        residuals: Vec<f64>,
    },
}

impl Error {
    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Compute(_) => 1,
            Error::Parse { .. } | Error::Usage(_) => 2,
            Error::NonConvergence { .. } => 3,
        }
    }
}
