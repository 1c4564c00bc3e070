//! Truncated Fock-space oracle for the oscillator cross means.
//!
//! Represents `H(omega) = (p^2 + omega^2 q^2)/2` in the number basis of a
//! unit-frequency reference mode, truncated to `n_levels` states, and pushes
//! it through the generic dense-matrix thermal machinery.  The squares of
//! `p` and `q` carry their analytic (pentadiagonal) matrix elements, i.e.
//! the operators are truncated after squaring.  Nothing here reuses the
//! su(1,1) closed forms, so agreement between the two routes is meaningful
//! evidence for both.

use num_complex::Complex64;

use super::profile::FrequencyProfile;
use crate::error::{Error, Result};
use crate::spectral::{boltzmann_weight, CMatrix};
use crate::{HermitianOperator, MIN_TEMPERATURE};

/// Relative tail weight above which the truncation is refused.
pub const TAIL_BUDGET: f64 = 1e-8;

/// A truncated thermal ensemble of `H(omega_ref)` at temperature `t`,
/// with the moments needed to evaluate `Tr(rho H(omega))` for any `omega`.
#[derive(Debug, Clone)]
pub struct FockEnsemble {
    omega_ref: f64,
    temperature: f64,
    n_levels: usize,
    ln_z: f64,
    mean_p_sq: f64,
    mean_q_sq: f64,
}

/// `q^2` truncated after squaring: diagonal `n + 1/2`, second off-diagonal
/// `sqrt((n+1)(n+2))/2`.
///
/// Squaring the truncated tridiagonal `q` instead would cut the ladder path
/// through the first dropped level and plant a spurious eigenvalue near
/// `N/2` in the corner of `H`, whose Boltzmann weight ruins the oracle's
/// advertised convergence.
fn position_sq_matrix(n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(i as f64 + 0.5, 0.0);
        if i + 2 < n {
            let v = (((i + 1) * (i + 2)) as f64).sqrt() / 2.0;
            m[(i, i + 2)] = Complex64::new(v, 0.0);
            m[(i + 2, i)] = Complex64::new(v, 0.0);
        }
    }
    m
}

/// `p^2` truncated after squaring: same as `q^2` with the off-diagonal sign
/// flipped.
fn momentum_sq_matrix(n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(i as f64 + 0.5, 0.0);
        if i + 2 < n {
            let v = (((i + 1) * (i + 2)) as f64).sqrt() / 2.0;
            m[(i, i + 2)] = Complex64::new(-v, 0.0);
            m[(i + 2, i)] = Complex64::new(-v, 0.0);
        }
    }
    m
}

impl FockEnsemble {
    pub fn new(omega_ref: f64, temperature: f64, n_levels: usize) -> Result<Self> {
        if !omega_ref.is_finite() || omega_ref <= 0.0 {
            return Err(Error::Domain(format!(
                "reference frequency must be positive, got {omega_ref:.6e}"
            )));
        }
        if !temperature.is_finite() || temperature < MIN_TEMPERATURE {
            return Err(Error::Domain(format!(
                "temperature must be finite and >= {MIN_TEMPERATURE:.0e}, got {temperature:.6e}"
            )));
        }
        if n_levels < 2 {
            return Err(Error::InvalidInput("need at least 2 Fock levels".into()));
        }
        let tail = (-omega_ref * n_levels as f64 / temperature).exp();
        if tail > TAIL_BUDGET {
            return Err(Error::InvalidInput(format!(
                "estimated truncation tail {tail:.3e} exceeds {TAIL_BUDGET:.0e}; \
                 raise the level count for omega = {omega_ref:.3e}, T = {temperature:.3e}"
            )));
        }

        let q_sq = position_sq_matrix(n_levels);
        let p_sq = momentum_sq_matrix(n_levels);
        let h_ref = HermitianOperator::new(
            (&p_sq + &q_sq * Complex64::new(omega_ref * omega_ref, 0.0))
                * Complex64::new(0.5, 0.0),
        )?;

        let beta = 1.0 / temperature;
        let bw = boltzmann_weight(&h_ref, beta)?;
        let rho = &bw.matrix * Complex64::new(1.0 / bw.trace, 0.0);

        let mean_of = |m: &CMatrix| -> f64 {
            let n = rho.nrows();
            let mut v = Complex64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    v += rho[(i, j)] * m[(j, i)];
                }
            }
            v.re
        };

        Ok(Self {
            omega_ref,
            temperature,
            n_levels,
            ln_z: bw.log_trace(beta),
            mean_p_sq: mean_of(&p_sq),
            mean_q_sq: mean_of(&q_sq),
        })
    }

    pub fn omega_ref(&self) -> f64 {
        self.omega_ref
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    pub fn ln_z(&self) -> f64 {
        self.ln_z
    }

    pub fn z(&self) -> f64 {
        self.ln_z.exp()
    }

    /// `Tr(rho H(omega))`; `omega = omega_ref` gives the ensemble energy.
    pub fn cross_mean(&self, omega: f64) -> Result<f64> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::Domain(format!("omega must be positive, got {omega:.6e}")));
        }
        Ok(0.5 * (self.mean_p_sq + omega * omega * self.mean_q_sq))
    }

    pub fn energy(&self) -> f64 {
        0.5 * (self.mean_p_sq + self.omega_ref * self.omega_ref * self.mean_q_sq)
    }
}

/// One-shot oracle values for a frequency pair.
#[derive(Debug, Clone, Copy)]
pub struct FockOracleValues {
    pub z: f64,
    pub ln_z: f64,
    pub cross_mean: f64,
}

/// `Z` of `H(omega_tprime)` and `Tr(rho H(omega_t))` from the truncated
/// number-basis representation.
pub fn fock_oracle_frequencies(
    omega_t: f64,
    omega_tprime: f64,
    temperature: f64,
    n_levels: usize,
) -> Result<FockOracleValues> {
    let ens = FockEnsemble::new(omega_tprime, temperature, n_levels)?;
    Ok(FockOracleValues { z: ens.z(), ln_z: ens.ln_z(), cross_mean: ens.cross_mean(omega_t)? })
}

/// Same oracle, with the frequencies taken from a profile at `(t, t')`.
pub fn fock_truncated_oracle(
    profile: &FrequencyProfile,
    t: f64,
    t_prime: f64,
    temperature: f64,
    n_levels: usize,
) -> Result<FockOracleValues> {
    let omega_t = profile.omega(t)?;
    let omega_tprime = profile.omega(t_prime)?;
    fock_oracle_frequencies(omega_t, omega_tprime, temperature, n_levels)
}
