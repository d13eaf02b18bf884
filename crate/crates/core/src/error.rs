//! Error type shared across the engine.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EngineError {
    /// A coefficient was requested outside the truncation budget, or the
    /// budget is too small to hold the residue monomial.
    #[error("truncation budget too small: {0}")]
    InsufficientOrder(String),

    /// Residue extraction requires a (z,w,h)-homogeneous input.
    #[error("series is not homogeneous: {0}")]
    NonHomogeneous(String),

    /// The fixed-point sum needs pairwise distinct localisation weights.
    #[error("repeated weight {0} in fixed-point data")]
    RepeatedWeight(String),

    /// Integration over the base needs a residue of pure top h-degree.
    #[error("residue h-degree {got} does not match dimension {expected}")]
    HDegreeMismatch { got: u32, expected: u32 },

    /// A structural property of the extracted degree polynomial failed.
    /// This indicates an engine bug, not an input problem.
    #[error("structural assertion failed: {0}")]
    Structural(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed rational literal: {0:?}")]
    BadRational(String),
}
