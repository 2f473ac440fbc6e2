//! Error type shared by all laboratory modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A requested size exceeds what the implementation can address
    /// (index arithmetic overflow, grid too large, and the like).
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// An index or interval falls outside the stored range of a sequence.
    #[error("range error: {0}")]
    Range(String),

    /// A stated precondition does not hold for the given arguments.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Mismatched lengths, moduli, or partition structure.
    #[error("shape error: {0}")]
    Shape(String),

    /// A value exceeds the 1-bounded contract.
    #[error("bound violation: {0}")]
    BoundViolation(String),

    /// The operation needs an invertible system but the given one is not.
    #[error("invertibility error: {0}")]
    Invertibility(String),

    /// A point lies outside the system's state space.
    #[error("domain error: {0}")]
    Domain(String),

    /// Empty or otherwise degenerate polynomial input.
    #[error("degenerate polynomial: {0}")]
    DegeneratePolynomial(String),
}
