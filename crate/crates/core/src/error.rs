use thiserror::Error;

/// Every failure the library can report.
///
/// Variants are grouped by what went wrong rather than by module, so the
/// command-line runner can map them onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("under-resolved grid on axis {axis}: need at least {required} points, have {actual}")]
    Resolution {
        axis: usize,
        required: usize,
        actual: usize,
    },

    #[error("multiplier '{label}' is not finite at frequency {frequency:?}")]
    Multiplier { label: String, frequency: Vec<f64> },

    #[error("quadrature did not converge: estimated error {estimate:e} above tolerance {tolerance:e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("divergence at t = {time}: max |u| = {max_modulus:e}")]
    Divergence { time: f64, max_modulus: f64 },

    #[error("cost guard: {0}")]
    Cost(String),

    #[error("singular configuration: {0}")]
    Singularity(String),

    #[error("wrap-around: {0}")]
    WrapAround(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Numerical divergence is reported separately from bad input.
    pub fn is_divergence(&self) -> bool {
        matches!(self, Error::Divergence { .. })
    }

    /// Errors caused by the caller's configuration rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Contract(_)
                | Error::Domain(_)
                | Error::Validation(_)
                | Error::Resolution { .. }
                | Error::Cost(_)
                | Error::Singularity(_)
                | Error::WrapAround(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
