use thiserror::Error;

/// Errors produced by the twist-buckling library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate:e}, error {error:e})")]
    Quadrature {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    /// A torque passed as an eigenvalue does not make the endpoint residual vanish.
    #[error("torque {torque} is not an eigenvalue: endpoint residual {residual:e} relative to amplitude")]
    NotAnEigenvalue { torque: f64, residual: f64 },

    /// No eigenvalue was found in a root-search bracket.
    #[error("no eigenvalue in bracket [{lo}, {hi}] (g(lo) = {g_lo:e}, g(hi) = {g_hi:e})")]
    NoRootInBracket {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    /// The optimizer could not find a non-decreasing step.
    #[error("step size underflow at iteration {iteration} (last step {step:e})")]
    StepUnderflow { iteration: usize, step: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
