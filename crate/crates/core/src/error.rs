use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point {z} lies within {distance:e} of a pole")]
    PoleProximity { z: Complex64, distance: f64 },

    #[error("derivative vanishes at {z} (|B'| = {modulus:e})")]
    DegenerateDerivative { z: Complex64, modulus: f64 },

    #[error("iteration did not converge: {0}")]
    NotConverged(String),

    #[error("curve passes within {distance:e} of critical value {value}")]
    NearCriticalValue { value: Complex64, distance: f64 },

    #[error("parameter t = {t} is critical: segment meets critical value {value}")]
    CriticalParameter { t: f64, value: Complex64 },

    #[error("step size underflow at r = {r:e} (h = {step:e})")]
    StepUnderflow { r: f64, step: f64 },
}
