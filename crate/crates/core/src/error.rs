use thiserror::Error;

use crate::kernel::RatVector;

/// Errors raised by the polyhedral kernel and everything built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The matrix is singular; `kernel` is a nonzero vector `v` with `M v = 0`.
    #[error("singular matrix")]
    Singular { kernel: RatVector },

    #[error("{0}")]
    Domain(String),

    #[error("capacity exceeded: {what} needs {needed}, limit is {limit}")]
    Capacity {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("unbounded: {0}")]
    Unbounded(String),

    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn dimension<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Dimension(msg.into()))
}
