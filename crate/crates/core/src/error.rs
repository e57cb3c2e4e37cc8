//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parity sequence: {0}")]
    InvalidParity(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("operator parity not declared")]
    MissingParity,
    #[error("operator is not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("invalid hook partition: {0}")]
    InvalidHook(String),
    #[error("one-dimensional module L({0}, {1}) is not polynomial")]
    OneDimensionalNotPolynomial(String, String),
    #[error("no such component: {0}")]
    NoSuchComponent(String),
    #[error("duplicate site coordinate at positions {0} and {1}")]
    DuplicateSite(usize, usize),
    #[error("pole collision: {0}")]
    PoleCollision(String),
    #[error("weight function vanishes identically")]
    ZeroFunction,
    #[error("size cap exceeded: {0}")]
    TooLarge(String),
    #[error("singular Jacobian (condition estimate {0:e})")]
    SingularJacobian(f64),
    #[error("Newton did not converge within {0} iterations")]
    MaxIterExceeded(usize),
    #[error("Newton iterate escaped to infinity (|t| = {0:e})")]
    Diverged(f64),
    #[error("continuation stalled: {0}")]
    ContinuationStall(String),
    #[error("value not representable in the requested field: {0}")]
    FieldMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
