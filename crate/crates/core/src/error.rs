use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Arguments violate an operation's preconditions (shape, range, spec).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative method stopped before reaching its tolerance.
    #[error("numerical failure: {message} (residual {residual:e})")]
    Numerical { message: String, residual: f64 },

    /// The homotopy path ran past its breakpoint budget. `best` is the last
    /// iterate and `residual` its KKT violation.
    #[error("lasso path exceeded {breakpoints} breakpoints (kkt residual {residual:e})")]
    PathLimit {
        breakpoints: usize,
        residual: f64,
        best: Vec<f64>,
    },

    #[error("{}: {message}", path.display())]
    Ingest { path: PathBuf, message: String },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn ingest(path: impl Into<PathBuf>, msg: impl Into<String>) -> Self {
        Error::Ingest {
            path: path.into(),
            message: msg.into(),
        }
    }

    /// Wraps `self` with a context label such as `"column 17"`.
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}
