use thiserror::Error;

use crate::spid::SpidViolation;

pub type Result<T, E = SpidError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum SpidError {
    #[error("{0} is not a prime in [2, 65536]")]
    InvalidPrime(u32),

    #[error("zero has no multiplicative inverse")]
    InverseOfZero,

    #[error("entry {value} is not a residue modulo {modulus}")]
    InvalidEntry { value: u32, modulus: u32 },

    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("field mismatch: GF({left}) vs GF({right})")]
    FieldMismatch { left: u32, right: u32 },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    /// A construction parameter violates a named inequality.
    #[error("constraint `{constraint}` violated: {detail}")]
    Constraint { constraint: String, detail: String },

    #[error("{0}")]
    NotSpid(SpidViolation),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{what} = {value} exceeds the cap {cap} (set SPIDLAB_ORACLE_CAPS=off to lift)")]
    CapExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },

    /// A proven statement failed to hold; this indicates a bug in the
    /// linear algebra, not bad input.
    #[error("internal theorem violation: {0}")]
    TheoremViolation(String),
}

impl SpidError {
    pub(crate) fn constraint(constraint: impl Into<String>, detail: impl Into<String>) -> Self {
        SpidError::Constraint {
            constraint: constraint.into(),
            detail: detail.into(),
        }
    }
}
