//! Crate-wide error type.

/// Errors produced by construction, verification and parsing.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A partition failed one of the named admissibility conditions of the
    /// construction. Equidistant partitions always pass; arbitrary ones get
    /// the first violated condition reported here.
    #[error("admissibility violation at j = {j}: {condition}")]
    Admissibility { condition: String, j: usize },

    #[error("x = {x} outside domain [{lo}, {hi}]")]
    OutsideDomain { x: f64, lo: f64, hi: f64 },

    /// The sampled function returned NaN or ±inf.
    #[error("non-finite function value at x = {0}")]
    NonFinite(f64),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("evaluation domain error: {0}")]
    EvalDomain(String),

    /// A plan invariant that the builder relies on did not hold.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn admissibility(condition: impl Into<String>, j: usize) -> Self {
        Error::Admissibility {
            condition: condition.into(),
            j,
        }
    }
}
