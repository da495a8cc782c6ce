use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A bracket had to grow beyond the overflow cap.
    #[error("overflow: {0}")]
    Overflow(String),

    #[error("no convergence: {0}")]
    Convergence(String),

    /// Winding query too close to the curve.
    #[error("guard violation: {0}")]
    Guard(String),

    /// Winding sum too far from an integer; the curve is under-sampled.
    #[error("insufficient sampling: {0}")]
    Sampling(String),

    /// An eigenvalue magnitude sits on the level, so the count is ambiguous.
    #[error("ambiguous point: {0}")]
    Ambiguous(String),

    /// Malformed serialized input.
    #[error("format error: {0}")]
    Format(String),

    /// A structural contract between modules was violated.
    #[error("contract violation: {0}")]
    Contract(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by invalid input rather than a numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Format(_))
    }
}
