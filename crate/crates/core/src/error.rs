use thiserror::Error;

/// Errors raised by the numerical kernels, the distributions and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the domain of the function (poles, invalid shapes, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Two evaluation routes disagree beyond tolerance.
    #[error("backend disagreement: {primary} ({primary_method}) vs {secondary} ({secondary_method}), tolerance {tolerance:e}")]
    Disagreement {
        primary: f64,
        primary_method: &'static str,
        secondary: f64,
        secondary_method: &'static str,
        tolerance: f64,
    },

    /// An iterative scheme ran out of budget before meeting its tolerance.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// The computation produced NaN or infinity where a finite value was required.
    #[error("non-finite result in {0}")]
    NonFinite(&'static str),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by numerical accuracy rather than bad input.
    pub fn is_accuracy(&self) -> bool {
        !matches!(self, Error::Domain(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
