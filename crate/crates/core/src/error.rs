use thiserror::Error;

use crate::forms::ValidationFailure;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input: non-finite matrix entries, bad parameters, unparsable addresses.
    #[error("invalid input: {0}")]
    Input(String),

    /// The operation is not defined for this argument.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: {what} = {requested} (limit {limit})")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("singular block in Schur complement at shift {shift} (pivot {pivot:e})")]
    Singular { shift: f64, pivot: f64 },

    #[error("no real preimage of {w} under R (discriminant {discriminant})")]
    NoRealPreimage { w: f64, discriminant: f64 },

    #[error("eigenvalue propagation hit the exceptional value 2p = {value} at level {level}")]
    ExceptionalCollision { value: f64, level: usize },

    #[error("iteration did not converge after {iterations} steps")]
    NotConverged { iterations: usize },

    #[error("resistance scheme rejected: {0}")]
    Validation(ValidationFailure),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
