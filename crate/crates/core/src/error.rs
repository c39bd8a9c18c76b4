use thiserror::Error;

/// Errors raised by the covariance-matrix and entanglement routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input does not have the shape of a covariance matrix.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// A physicality or regime condition failed. The message names the inequality.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation only holds for a restricted class of states.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// An iterative routine could not produce a trustworthy answer.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
