use crate::numkernel::ComplexValue;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, EtaError>;

/// Errors raised by the numerical routines.
///
/// Variants map onto the CLI exit codes: `Usage` is a caller mistake (2),
/// everything else is a numeric or domain failure (3).
#[derive(Debug, Clone, Error, PartialEq)]
pub enum EtaError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of the gamma function at s = {re}{im:+}i")]
    Pole { re: f64, im: f64 },

    #[error("singular point: {0}")]
    Singularity(String),

    /// The truncation cap was hit before the stop rule fired. Carries the
    /// best available value so callers may still report it.
    #[error("series did not reach tolerance after {terms_used} terms (est. error {est_error:e})")]
    Accuracy {
        best: ComplexValue,
        est_error: f64,
        terms_used: usize,
    },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("iteration did not converge: {0}")]
    NonConvergence(String),

    #[error("zero on or near the contour boundary (min |eta| = {min_modulus:e})")]
    ZeroOnBoundary { min_modulus: f64 },

    #[error("winding number {value} is not within 0.05 of an integer")]
    NonIntegerWinding { value: f64 },
}

impl EtaError {
    pub fn is_usage(&self) -> bool {
        matches!(self, EtaError::Usage(_))
    }
}
