//! Two-level systems in the Bloch parameterization `H = (h0 I + h . sigma)/2`.
//!
//! Entropy, mean energy, cross means, and the entropy-difference bounds all
//! have closed forms in `|h|`, the angle between the two field vectors, and
//! the temperatures.  The closed forms are written in terms of `exp(-x)`
//! with `x = |h|/T >= 0`, so they stay finite for arbitrarily large fields
//! or small temperatures where `cosh(x)` would overflow.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::CMatrix;
use crate::thermal::{BoundsResult, ThermalSpec};
use crate::{HermitianOperator, MIN_TEMPERATURE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochHamiltonian {
    /// Coefficient of the identity part.
    pub h0: f64,
    /// Field vector multiplying the Pauli matrices.
    pub vector: [f64; 3],
}

fn check_temperature(t: f64) -> Result<()> {
    if !t.is_finite() || t < MIN_TEMPERATURE {
        return Err(Error::Domain(format!(
            "temperature must be finite and >= {MIN_TEMPERATURE:.0e}, got {t:.6e}"
        )));
    }
    Ok(())
}

impl BlochHamiltonian {
    pub fn new(h0: f64, vector: [f64; 3]) -> Result<Self> {
        if !h0.is_finite() || vector.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("Bloch parameters must be finite".into()));
        }
        Ok(Self { h0, vector })
    }

    /// Euclidean norm of the field vector.
    pub fn norm(&self) -> f64 {
        let [x, y, z] = self.vector;
        (x * x + y * y + z * z).sqrt()
    }

    /// The 2x2 matrix `(h0 I + h . sigma)/2`.
    pub fn to_matrix(&self) -> HermitianOperator {
        let [hx, hy, hz] = self.vector;
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(0.5 * (self.h0 + hz), 0.0);
        m[(1, 1)] = Complex64::new(0.5 * (self.h0 - hz), 0.0);
        m[(0, 1)] = Complex64::new(0.5 * hx, -0.5 * hy);
        m[(1, 0)] = Complex64::new(0.5 * hx, 0.5 * hy);
        HermitianOperator::new(m).expect("Bloch matrix is Hermitian by construction")
    }

    pub fn thermal_spec(&self, temperature: f64) -> Result<ThermalSpec> {
        ThermalSpec::new(self.to_matrix(), temperature)
    }

    pub fn entropy_closed(&self, temperature: f64) -> Result<f64> {
        entropy_from_norm(self.norm(), temperature)
    }

    pub fn mean_energy_closed(&self, temperature: f64) -> Result<f64> {
        check_temperature(temperature)?;
        let x = self.norm() / temperature;
        Ok(0.5 * (self.h0 - self.norm() * (0.5 * x).tanh()))
    }

    pub fn ln_z_closed(&self, temperature: f64) -> Result<f64> {
        check_temperature(temperature)?;
        let x = self.norm() / temperature;
        // ln(2 cosh(x/2)) = x/2 + ln(1 + e^-x)
        Ok(-0.5 * self.h0 / temperature + 0.5 * x + (-x).exp().ln_1p())
    }
}

/// Von Neumann entropy of a thermal two-level state with field norm
/// `norm` at temperature `t`.
///
/// Equals `ln 2 + ln((1 + cosh x)/2) / ... ` in its textbook form; here it
/// is evaluated as `x/(e^x + 1) + ln(1 + e^-x)` with `x = norm/t`, which is
/// monotone from `ln 2` at `x = 0` down to `0` as `x -> inf` without
/// overflowing.
pub fn entropy_from_norm(norm: f64, t: f64) -> Result<f64> {
    check_temperature(t)?;
    if !norm.is_finite() || norm < 0.0 {
        return Err(Error::InvalidInput(format!("field norm must be >= 0, got {norm:.6e}")));
    }
    let x = norm / t;
    Ok(x / (x.exp() + 1.0) + (-x).exp().ln_1p())
}

/// `Tr(rho_1 H_2)` in closed form; `rho_1` is the thermal state of `b1` at
/// `t1`.  The `|h| -> 0` limit (maximally mixed state) gives `h0_2 / 2`.
pub fn cross_mean_closed(b1: &BlochHamiltonian, b2: &BlochHamiltonian, t1: f64) -> Result<f64> {
    check_temperature(t1)?;
    let n1 = b1.norm();
    if n1 == 0.0 {
        return Ok(0.5 * b2.h0);
    }
    let dot: f64 = b1
        .vector
        .iter()
        .zip(b2.vector.iter())
        .map(|(a, b)| a * b)
        .sum();
    let x = n1 / t1;
    Ok(0.5 * b2.h0 - 0.5 * (dot / n1) * (0.5 * x).tanh())
}

/// Entropy-difference bounds from the field norms and the angle between the
/// two field vectors; the identity parts drop out.
pub fn bounds_from_polar(
    norm1: f64,
    norm2: f64,
    cos_theta: f64,
    t1: f64,
    t2: f64,
) -> Result<BoundsResult> {
    check_temperature(t1)?;
    check_temperature(t2)?;
    if !(norm1.is_finite() && norm2.is_finite()) || norm1 < 0.0 || norm2 < 0.0 {
        return Err(Error::InvalidInput("field norms must be finite and >= 0".into()));
    }
    if !cos_theta.is_finite() {
        return Err(Error::InvalidInput("cos(theta) must be finite".into()));
    }
    let c = cos_theta.clamp(-1.0, 1.0);
    let th1 = (0.5 * norm1 / t1).tanh();
    let th2 = (0.5 * norm2 / t2).tanh();
    let lower = 0.5 * norm2 / t2 * (c * th1 - th2);
    let upper = 0.5 * norm1 / t1 * (th1 - c * th2);
    let exact = entropy_from_norm(norm2, t2)? - entropy_from_norm(norm1, t1)?;
    BoundsResult::checked(lower, exact, upper)
}

/// Entropy-difference bounds between the thermal states of two Bloch
/// Hamiltonians.
pub fn delta_s_bounds_qubit(
    b1: &BlochHamiltonian,
    b2: &BlochHamiltonian,
    t1: f64,
    t2: f64,
) -> Result<BoundsResult> {
    let n1 = b1.norm();
    let n2 = b2.norm();
    let cos_theta = if n1 > 0.0 && n2 > 0.0 {
        let dot: f64 = b1
            .vector
            .iter()
            .zip(b2.vector.iter())
            .map(|(a, b)| a * b)
            .sum();
        dot / (n1 * n2)
    } else {
        // A zero field makes its tanh factor vanish, so the angle is moot.
        0.0
    };
    bounds_from_polar(n1, n2, cos_theta, t1, t2)
}
