use thiserror::Error;

/// Errors raised by construction, evaluation and checking.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An instance or parameter lies outside the class a statement is about.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("evaluation point lies within {distance:e} of pole #{index}")]
    NearPole { index: usize, distance: f64 },

    /// The evaluation point sits in the excluded neighbourhood of a zero.
    /// Suites record these points as skipped rather than failed.
    #[error("evaluation point lies within the exclusion radius of a zero")]
    NearZero { index: Option<usize> },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }

    /// True for the errors that mark an evaluation point as singular.
    pub fn is_singular_point(&self) -> bool {
        matches!(self, Error::NearPole { .. } | Error::NearZero { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
