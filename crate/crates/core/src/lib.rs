//! Thermal states of finite quantum systems and two-sided bounds on entropy
//! and free-energy differences.
//!
//! The library builds canonical and grand-canonical Gibbs states from dense
//! Hermitian operators, evaluates exact entropy / log-partition-function /
//! Helmholtz differences between two such states, and brackets each quantity
//! with the analytic lower/upper bounds that follow from positivity of the
//! relative entropy between the pair of states.  On top of the dense-matrix
//! route there are three structured front ends: vibrational-overlap systems
//! (Franck-Condon factors between two level sets), two-level systems in the
//! Bloch parameterization, and the time-dependent harmonic oscillator driven
//! through an arbitrary frequency profile.
//!
//! All numerical claims made by the public operations are re-checked
//! internally (sandwich ordering, dual-route agreement, conserved quantities
//! of the oscillator trajectory) and violations surface as [`Error`] values
//! rather than silently wrong numbers.

pub mod error;
pub mod franck_condon;
pub mod oscillator;
pub mod qubit;
pub mod sampling;
pub mod spectral;
pub mod thermal;

pub use error::{Error, Result};
pub use spectral::{CMatrix, CVector, HermitianOperator, SpectralDecomposition};
pub use thermal::{
    gibbs_state, grand_gibbs_state, BoundsResult, GrandThermalSpec, ThermalSpec, ThermalState,
};

/// Temperatures below this are rejected everywhere: the Boltzmann exponents
/// they produce are no longer representable for generic spectra.
pub const MIN_TEMPERATURE: f64 = 1e-6;

/// Largest magnitude allowed for a Boltzmann exponent before the weight
/// computation switches to the ground-state-shifted form.
pub const EXPONENT_BUDGET: f64 = 700.0;

/// Probabilities below this are treated as exact zeros when forming `p ln p`.
pub const PROBABILITY_FLOOR: f64 = 1e-300;
