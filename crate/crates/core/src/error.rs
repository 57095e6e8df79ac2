//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors raised while building parameters, spectra or observable series.
#[derive(Debug, Error)]
pub enum Error {
    /// A physical parameter failed validation; `field` names the offender.
    #[error("{field} {reason}")]
    InvalidParam { field: &'static str, reason: String },

    /// The secular function was evaluated too close to a cotangent pole.
    #[error(
        "secular function evaluated within {guard:e} of the pole at x = {pole}; shrink the bracket"
    )]
    NearPole { pole: f64, guard: f64 },

    /// No sign change could be established inside a spectral branch.
    #[error("failed to bracket the root of branch {branch}")]
    Bracketing { branch: usize },

    /// Root polishing stalled before reaching the requested tolerance.
    #[error("root refinement did not converge in branch {branch}")]
    RootConvergence { branch: usize },

    /// The iterative eigensolver exhausted its iteration budget.
    #[error("symmetric eigensolver failed to converge")]
    EigenConvergence,

    /// A requested time grid would allocate more samples than the cap allows.
    #[error("time grid of {requested} samples exceeds the cap of {cap}; use a coarser dt")]
    GridTooLarge { requested: usize, cap: usize },

    /// A window passed to a series post-processor lies outside the series.
    #[error("window [{ta}, {tb}] lies outside the computed series")]
    WindowOutOfRange { ta: f64, tb: f64 },

    /// Inputs built from different parameter sets or truncations were mixed.
    #[error("{0}")]
    Incompatible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            field,
            reason: reason.into(),
        }
    }
}
