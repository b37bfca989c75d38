use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Array shapes do not agree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// The requested rate leaves no room for the analysis (negative gap etc.).
    #[error("infeasible rate: {0}")]
    InfeasibleRate(String),
    /// The schedule recursion's preconditions fail.
    #[error("infeasible schedule: {0}")]
    InfeasibleSchedule(String),
    /// The configuration is not supported by the operation (e.g. non-exponential allocation).
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    /// A degenerate input such as an all-zero received vector.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// An iterative procedure failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// Memory for a requested object cannot be addressed.
    #[error("resource error: {0}")]
    Resource(String),
    /// The outer code could not correct the received word.
    #[error("outer decode failure: {0}")]
    DecodeFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
