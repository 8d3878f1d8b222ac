use thiserror::Error;

/// Errors raised while building groups, actions, measures and instances.
///
/// Verification failures are never errors: they are reported through
/// [`CheckReport`](crate::report::CheckReport).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("group too large: closure exceeds cap {cap}")]
    GroupTooLarge { cap: usize },

    #[error("resource cap exceeded: {what} = {value} > {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("not invariant: {0}")]
    NotInvariant(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("malformed rational {0:?}")]
    MalformedRational(String),

    #[error("mutation not applicable: {0}")]
    MutationNotApplicable(String),

    #[error("quadrature support escapes the window: {0}")]
    SupportEscapesWindow(String),

    #[error("modular function calibration failed: {0}")]
    Calibration(String),
}

impl Error {
    /// True for the errors that correspond to a resource cap rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::GroupTooLarge { .. } | Error::CapExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
