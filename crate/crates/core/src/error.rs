use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function (non-finite input,
    /// probability outside `[0, 1]`, quantile at `0` or `1`, negative radicand).
    #[error("domain error: {0}")]
    Domain(String),

    /// A detector with zero (or negative) sensitivity was used where a criterion
    /// has to be recovered from a likelihood ratio.
    #[error("degenerate detector: sensitivity must be positive, got {0}")]
    DegenerateDetector(f64),

    /// An aid whose alert probabilities sit at 0 or 1 makes one of the
    /// contingent criteria infinite.
    #[error("degenerate aid: alert probability at the boundary (P(A|S1) = {p_alert_s1}, P(A|S0) = {p_alert_s0})")]
    DegenerateAid { p_alert_s1: f64, p_alert_s0: f64 },

    /// A model parameter violates a structural invariant.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The α fit has nothing to fit (every pair has an uninformative aid).
    #[error("alpha fit undefined: {0}")]
    FitUndefined(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_finite<T: num_traits::Float>(name: &str, x: T) -> Result<T> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Domain(format!("{name} must be finite")))
    }
}
