use thiserror::Error;

/// Errors produced by the engine model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OttoError {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("Fock truncation n_max = {n_max} leaves tail mass {tail:e} above budget {budget:e} (need n_max >= {required})")]
    Truncation {
        n_max: usize,
        required: usize,
        tail: f64,
        budget: f64,
    },

    #[error("integration failed at t = {time}: {reason}")]
    Integration { time: f64, reason: String },

    #[error("quadrature did not reach tolerance {tolerance:e} within {intervals} subintervals (error estimate {estimate:e})")]
    Quadrature {
        tolerance: f64,
        intervals: usize,
        estimate: f64,
    },

    #[error("no relaxation to tolerance {tol:e} before t = {t_max} (distance {distance:e})")]
    NonConvergence { tol: f64, t_max: f64, distance: f64 },

    #[error("not an engine: {0}")]
    NonEngine(String),

    #[error("objective is not unimodal on the bracket: {0}")]
    NotUnimodal(String),
}

pub type Result<T> = std::result::Result<T, OttoError>;

pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> OttoError {
    OttoError::Domain {
        name,
        value,
        expected,
    }
}

/// Fails unless `value` is finite and strictly positive.
pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(domain(name, value, "finite and > 0"))
    }
}

/// Fails unless `value` is finite and non-negative.
pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(domain(name, value, "finite and >= 0"))
    }
}
