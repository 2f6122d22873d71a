use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A classical evaluation was requested on a declared kink of a profile.
    #[error("point t = {t} lies on the singular point t0 = {t0} (corner rules apply there)")]
    OnCorner { t: f64, t0: f64 },

    #[error("singular point: {0}")]
    Singular(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("integration produced a non-finite state after r = {last_r}")]
    BlowUp { last_r: f64 },

    /// The quadrature map has a finite total integral and cannot reach the requested radius.
    #[error("r = {r} is beyond the range of the inverse quadrature map (sup r = {r_max})")]
    OutOfRange { r: f64, r_max: f64 },

    #[error("radial reduction invalid: v'' < v'/r at r = {r}")]
    ReductionInvalid { r: f64 },

    #[error("inequality violated at ({x}, {y}): residual {residual}")]
    InequalityViolated { x: f64, y: f64, residual: f64 },
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
