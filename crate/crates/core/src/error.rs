//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("time window too small: {0}")]
    WindowTooSmall(String),

    #[error("quadrature error: {0}")]
    Quadrature(String),

    #[error("peak power constraint violated: user {user}, |x|^2 = {power} W > {limit} W")]
    PeakPowerViolation { user: usize, power: f64, limit: f64 },

    #[error("grid aliasing detected: {0}")]
    Aliasing(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unknown input law: {0}")]
    UnknownLaw(String),

    #[error("file format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
