//! Crate-wide error type.
//!
//! Variants split into two families that callers are expected to treat
//! differently: invalid inputs ([`Error::is_validation`]) and numerical
//! breakdowns detected while computing ([`Error::is_numerical`]).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |H - H^dag| = {max_asymmetry:.3e} exceeds tolerance {tolerance:.3e}")]
    NotHermitian { max_asymmetry: f64, tolerance: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("eigensolver failed to converge for a {dim}x{dim} matrix")]
    EigenFailed { dim: usize },

    #[error("internal consistency check failed: {what} (magnitude {magnitude:.3e}, tolerance {tolerance:.3e})")]
    Inconsistency { what: String, magnitude: f64, tolerance: f64 },

    #[error("bounds violate ordering: lower {lower:.17e}, exact {exact:.17e}, upper {upper:.17e}")]
    SandwichViolation { lower: f64, exact: f64, upper: f64 },

    #[error("numerical degeneracy: {0}")]
    Degeneracy(String),

    #[error("integration step size underflow at t = {t:.6e}")]
    StepSizeUnderflow { t: f64 },

    #[error("integration exceeded {max_steps} steps")]
    TooManySteps { max_steps: usize },

    #[error("conserved Wronskian drifted by {drift:.3e} at t = {t:.6e} (budget {budget:.3e})")]
    WronskianDrift { t: f64, drift: f64, budget: f64 },
}

impl Error {
    /// True for errors caused by malformed or out-of-domain inputs.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian { .. }
                | Error::DimensionMismatch { .. }
                | Error::InvalidInput(_)
                | Error::Domain(_)
        )
    }

    /// True for errors raised by numerical breakdown during a computation.
    pub fn is_numerical(&self) -> bool {
        !self.is_validation()
    }
}
