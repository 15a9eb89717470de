//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, MgonalError>;

#[derive(Debug, Error)]
pub enum MgonalError {
    /// Malformed or out-of-domain input (bad m, zero where a unit is needed, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    /// Coefficient tuple with gcd > 1; such tuples are rejected, never normalized.
    #[error("coefficient tuple is not primitive (gcd = {gcd})")]
    NonPrimitive { gcd: u64 },

    /// Brute-force oracle refused an instance with too many residue tuples.
    #[error("brute-force oracle cap exceeded: {requested} residue tuples > cap {cap}")]
    OracleCapExceeded { requested: u128, cap: u128 },

    /// A documented precondition of the operation was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("insufficient p-adic precision: need exponent {required}, have {available}")]
    InsufficientPrecision { required: u32, available: u32 },

    /// Requested work exceeds a configured resource budget.
    #[error("resource limit: {0}")]
    Resource(String),

    /// A result the theory says cannot happen. Carries diagnostics; never a panic.
    #[error("anomaly: {0}")]
    Anomaly(String),
}

impl MgonalError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        MgonalError::InvalidInput(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        MgonalError::Contract(msg.into())
    }
}
