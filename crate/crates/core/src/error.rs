use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("surface mismatch: F_{left} vs F_{right}")]
    SurfaceMismatch { left: i64, right: i64 },

    #[error("invalid configuration: violates {inequality}")]
    InvalidConfig { inequality: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-torus point: coordinate {index} is zero")]
    NonTorusPoint { index: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An internal consistency check failed. Always a bug, never user error.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
