//! Experiment orchestration for the feklab library: weight expressions,
//! flat config files, rate studies and plot/CSV emission.

pub mod config;
pub mod expr;
pub mod study;
pub mod svg;

use feklab::error::Error;

/// Process exit code for an error: 2 config, 3 numeric, 4 consistency.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Format(_) | Error::UnsupportedVersion { .. } | Error::Io(_) => 2,
        Error::Numeric(_) | Error::DegenerateMeasure(_) => 3,
        Error::Consistency(_) => 4,
    }
}
