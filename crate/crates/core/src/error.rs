use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Payload values are reported as `f64` regardless of the scalar type in use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("{function}: series did not reach tolerance after {terms} terms (achieved relative error {achieved:e})")]
    NonConvergent {
        function: &'static str,
        terms: usize,
        achieved: f64,
    },
    #[error("image sum capped at |m| <= {max_m}; tail bound {achieved_bound:e} above tolerance")]
    TruncationCapReached { max_m: usize, achieved_bound: f64 },
    #[error("quadrature failure in {context}: error estimate {estimate:e} exceeds {tolerance:e}")]
    QuadratureFailure {
        context: String,
        estimate: f64,
        tolerance: f64,
    },
    #[error("Laplace transform at s = {s}: tail estimate {tail:e} exceeds {tolerance:e}")]
    TailDominates { s: f64, tail: f64, tolerance: f64 },
    #[error("singular tridiagonal system at time step {step}")]
    SingularSystem { step: usize },
    #[error("unknown scenario `{0}`")]
    ScenarioUnknown(String),
    #[error("unknown verification suite `{0}`")]
    SuiteUnknown(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        name,
        value,
        reason,
    }
}
