use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of a formula (non-positive mass, NaN, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A curve, grid or geometry failed validation.
    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    /// The gravito-electric field of a line mass is undefined on the axis.
    #[error("point lies on the solenoid axis (r = 0)")]
    AxisSingular,

    #[error("singular metric: g00 vanishes at {0}")]
    SingularMetric(String),

    #[error("unsupported order or root index: {0}")]
    Range(String),

    #[error("wrong mode kind: {0}")]
    Kind(String),

    #[error("undamped resonance: damping rate must be positive")]
    UndampedResonance,

    /// Integration step too large for the fastest rate in the system.
    #[error("step size {dt:e} s exceeds stability limit {limit:e} s")]
    Stability { dt: f64, limit: f64 },

    /// Integration produced NaN or infinity.
    #[error("non-finite state at t = {t:e} s after {step} steps")]
    NonFinite { t: f64, step: usize },

    #[error("frequency mismatch {detuning:e} rad/s exceeds linewidth 1/tau = {linewidth:e} rad/s")]
    Detuned { detuning: f64, linewidth: f64 },
}

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {value}")))
    }
}

pub(crate) fn ensure_non_negative(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{name} must be non-negative and finite, got {value}")))
    }
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {value}")))
    }
}
