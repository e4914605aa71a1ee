//! Error types shared across the library.

use thiserror::Error;

/// Errors produced by exact-arithmetic and gluing routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Two elements from different fields were combined.
    #[error("field descriptor mismatch: {0}")]
    FieldMismatch(String),

    /// Division by zero in a field or polynomial ring.
    #[error("division by zero")]
    DivisionByZero,

    /// An operation received a zero input where a nonzero one is required.
    #[error("zero input not allowed: {0}")]
    ZeroInput(String),

    /// A polynomial with repeated roots was passed where a separable one is required.
    #[error("inseparable polynomial: {0}")]
    Inseparable(String),

    /// The requested splitting tower exceeds the supported degree over the rationals.
    #[error("tower unsupported: {0}")]
    TowerUnsupported(String),

    /// A gluing datum turned out not to be rational over the base field.
    #[error("datum not rational: {0}")]
    DatumNotRational(String),

    /// The construction hit a degenerate parameter locus.
    #[error("degenerate gluing locus: {0}")]
    Degenerate(String),

    /// Input fails a structural precondition (degree, genus, characteristic, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Verification of a constructed object failed.
    #[error("verification failed: {0}")]
    VerificationFailed(String),

    /// An integer was too large to factor with the built-in routines.
    #[error("integer factorization out of range: {0}")]
    FactorOutOfRange(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
