//! Crate-wide error type.

use crate::resnet::Mode;

/// Everything that can go wrong across the library.
///
/// The CLI maps these onto exit codes, so keep the variants meaningful:
/// input-data problems (`Parse`, `Unsupported`, `Io`) are distinct from
/// caller mistakes (`Domain`, `ModeMismatch`, ...) and from fit failures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument is outside the physically meaningful range.
    #[error("domain error: {0}")]
    Domain(String),

    /// A response function was called with params of the other operating mode.
    #[error("mode mismatch: operation requires {expected:?} params, got {got:?}")]
    ModeMismatch { expected: Mode, got: Mode },

    /// Geometry outside the validity range of the closed form in use.
    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    /// A design request with no physical solution.
    #[error("infeasible design: {0}")]
    InfeasibleDesign(String),

    /// A trace without a usable resonance dip.
    #[error("no resonance found: {0}")]
    NoResonance(String),

    /// The least-squares normal equations are singular at the requested point.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// Malformed input text (Touchstone or CSV).
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Recognized but deliberately unsupported input (e.g. Touchstone v2).
    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
