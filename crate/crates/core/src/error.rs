use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Inconsistent or degenerate configuration (grids, intervals, sizes).
    #[error("configuration error: {0}")]
    Config(String),
    /// An iterative solver failed to converge.
    #[error("solver error: {message}")]
    Solver { message: String, history: Vec<f64> },
    /// A requested accuracy cannot be met with the supplied data.
    #[error("accuracy error: {0}")]
    Accuracy(String),
    /// A least-squares fit could not be formed.
    #[error("fit error: {0}")]
    Fit(String),
    /// The descent collapsed onto the trivial solution.
    #[error("seed error: {0}")]
    Seed(String),
    /// Malformed serialized data.
    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn solver(msg: impl Into<String>, history: Vec<f64>) -> Self {
        Error::Solver {
            message: msg.into(),
            history,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
