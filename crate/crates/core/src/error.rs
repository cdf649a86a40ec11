//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates a model invariant. `field` names the offending
    /// parameter so callers can report it.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// The potential denominator `1 - q e^{-α(t - t_e)}` is below the floor.
    #[error("potential is singular at t = {t} (|denominator| = {denominator:e})")]
    SingularPotential { t: f64, denominator: f64 },

    /// The square root defining 1/R has a negative argument.
    #[error("1/R is not real: radicand = {radicand}")]
    RNotReal { radicand: f64 },

    #[error("state n = {n} is not bound (gamma1 = {gamma1})")]
    NonBoundState { n: usize, gamma1: f64 },

    #[error("point outside the wavefunction domain: {0}")]
    Domain(String),

    #[error("normalization integral is not finite and positive: {value}")]
    IntegralNonFinite { value: f64 },

    #[error("Newton iteration for Gauss-Legendre node {index} of {npoints} did not converge")]
    QuadratureNoConvergence { index: usize, npoints: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid window [{t_lo}, {t_hi}] contains the potential singularity at t = {t_singular}")]
    SingularityInWindow {
        t_lo: f64,
        t_hi: f64,
        t_singular: f64,
    },

    #[error("eigenvalue n = {n}: Richardson error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    ConvergenceFailure {
        n: usize,
        estimate: f64,
        tolerance: f64,
    },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
