//! Error type shared by every module.

use thiserror::Error;

/// Errors raised by constructors and operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A size guard was hit (bitset width, lattice size, symbolic expansion size).
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Malformed input: bad JSON, out-of-range parameters, non-ideals, shape mismatches.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// An element name that does not belong to the structure at hand.
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    /// An operation that needs an incomparable pair received a comparable one.
    #[error("elements `{0}` and `{1}` are comparable")]
    Comparable(String, String),
    /// A standing self-check failed; this signals a bug, not bad input.
    #[error("internal check failed: {0}")]
    Internal(String),
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
