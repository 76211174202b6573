//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad user input: set does not fit the chart, inconsistent sizes, ...
    #[error("configuration error: {0}")]
    Config(String),

    /// A measure for which the L² semi-norm is not a norm (singular Gram).
    #[error("degenerate measure: {0}")]
    DegenerateMeasure(String),

    /// A solver failed to converge or produced non-finite values.
    #[error("numerical failure: {0}")]
    Numeric(String),

    /// A cross-check that should hold for a resolved run failed.
    #[error("consistency check failed: {0}")]
    Consistency(String),

    /// File carries a format version this build does not understand.
    #[error("unsupported format version {found} (this build reads version {expected})")]
    UnsupportedVersion { found: String, expected: u32 },

    /// Corrupted or truncated on-disk data.
    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
