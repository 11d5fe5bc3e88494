//! Error type shared across the crate.

use crate::calibrate::CalibrationFit;

/// Errors produced by validation, special-function range checks, and fits.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter failed validation. `field` names the offending input.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParam { field: &'static str, reason: String },

    /// Bessel evaluation requested outside the validated argument range.
    #[error("bessel argument |z| = {argument:e} exceeds validated range {limit:e}")]
    BesselRange { argument: f64, limit: f64 },

    /// The input curve cannot constrain the requested fit parameters.
    #[error("calibration input ill-conditioned: {0}")]
    IllConditioned(String),

    /// The fit stalled before reaching the convergence tolerance. The best
    /// iterate found is carried so callers can inspect how far it got.
    #[error("fit did not converge after {iterations} iterations (rms residual {rms:e})", rms = best.rms_residual)]
    FitDidNotConverge {
        iterations: usize,
        best: Box<CalibrationFit>,
    },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
