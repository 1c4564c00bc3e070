//! su(1,1) structure of the driven oscillator.
//!
//! The trajectory `eps(t)` defines ladder operators whose quadratic
//! combinations `K0`, `K+`, `K-` close an su(1,1) algebra, and every
//! instantaneous Hamiltonian is a real combination of them:
//! `H(tau) = alpha(t,tau) K- + alpha*(t,tau) K+ + gamma(t,tau) K0` in the
//! ladder basis anchored at time `t`.  Expanding the thermal weight
//! `exp(-H(t')/T)` in the same basis gives closed-form `A0`, `A+`
//! coefficients, the partition function, and the thermal means of the
//! generators; recombining those means with the equal-time coefficients of
//! `H(t)` reproduces the cross mean `Tr(rho H(t))` without any matrix
//! representation.

use num_complex::Complex64;

use super::classical::ClassicalSolution;
use crate::error::{Error, Result};
use crate::MIN_TEMPERATURE;

/// Tolerance scale for the `gamma^2 - 4|alpha|^2 = 4 omega^2(t')` identity.
pub const SU11_IDENTITY_TOL: f64 = 1e-8;
/// Below this the normal-ordering denominator counts as degenerate.
pub const DEGENERACY_FLOOR: f64 = 1e-12;
/// Largest `omega(t')/T` the weight expansion accepts before the
/// exponentials degenerate.
pub const MAX_THERMAL_EXPONENT: f64 = 350.0;

fn check_temperature(t: f64) -> Result<f64> {
    if !t.is_finite() || t < MIN_TEMPERATURE {
        return Err(Error::Domain(format!(
            "temperature must be finite and >= {MIN_TEMPERATURE:.0e}, got {t:.6e}"
        )));
    }
    Ok(t)
}

/// Coefficients of `H(t')` in the ladder basis anchored at `t`.
#[derive(Debug, Clone, Copy)]
pub struct Su11Coefficients {
    /// Multiplies `K-`; its conjugate multiplies `K+`.
    pub alpha: Complex64,
    /// Multiplies `K0`; real and at least `2 omega(t')`.
    pub gamma: f64,
    /// `omega^2(t')`, kept for the identity check and downstream use.
    pub omega_sq_tprime: f64,
}

/// `alpha(t,t') = (eps'*(t)^2 + omega^2(t') eps*(t)^2)/2` and
/// `gamma(t,t') = |eps'(t)|^2 + omega^2(t') |eps(t)|^2`.
///
/// The conserved Wronskian forces `gamma^2 - 4|alpha|^2 = 4 omega^2(t')`;
/// the computed values are rejected if they violate it beyond
/// `1e-8 * max(1, gamma^2)`.
pub fn su11_coefficients(
    sol: &ClassicalSolution,
    t: f64,
    t_prime: f64,
) -> Result<Su11Coefficients> {
    sol.check_in_range(t_prime)?;
    let (eps, deps) = sol.eval(t)?;
    let w2p = sol.profile().omega_sq(t_prime);
    let alpha = 0.5 * (deps.conj() * deps.conj() + w2p * eps.conj() * eps.conj());
    let gamma = deps.norm_sqr() + w2p * eps.norm_sqr();

    let identity_gap = (gamma * gamma - 4.0 * alpha.norm_sqr() - 4.0 * w2p).abs();
    let tol = SU11_IDENTITY_TOL * (gamma * gamma).max(1.0);
    if identity_gap > tol {
        return Err(Error::Inconsistency {
            what: "su(1,1) coefficients violate the Wronskian identity".into(),
            magnitude: identity_gap,
            tolerance: tol,
        });
    }
    Ok(Su11Coefficients { alpha, gamma, omega_sq_tprime: w2p })
}

/// Expansion coefficients of the thermal weight `exp(-H(t')/T)` in the
/// ladder basis anchored at `t`, evaluated in overflow-free form.
#[derive(Debug, Clone, Copy)]
pub struct AppendixCoefficients {
    pub a0: f64,
    pub aplus: Complex64,
    /// `omega(t')`, carried for the closed-form fallbacks.
    pub omega_tprime: f64,
    pub temperature: f64,
}

impl AppendixCoefficients {
    pub fn aminus(&self) -> Complex64 {
        self.aplus.conj()
    }

    /// `(1 - sqrt(A0))^2 - |A+|^2`, the normal-ordering denominator.
    pub fn denominator(&self) -> f64 {
        let s = self.a0.sqrt();
        (1.0 - s) * (1.0 - s) - self.aplus.norm_sqr()
    }
}

/// `A0 = 4 omega^2(t') / (2 omega(t') cosh x + gamma sinh x)^2` and
/// `A+ = -2 alpha* sinh x / (2 omega(t') cosh x + gamma sinh x)` with
/// `x = omega(t')/T`, computed through `exp(-2x)` so large `x` underflows
/// gracefully instead of overflowing.
pub fn appendix_coefficients(
    sol: &ClassicalSolution,
    t: f64,
    t_prime: f64,
    temperature: f64,
) -> Result<AppendixCoefficients> {
    check_temperature(temperature)?;
    let su = su11_coefficients(sol, t, t_prime)?;
    if su.omega_sq_tprime <= 0.0 {
        return Err(Error::Domain(format!(
            "omega(t') must be positive for the thermal expansion, got omega^2 = {:.6e}",
            su.omega_sq_tprime
        )));
    }
    let wp = su.omega_sq_tprime.sqrt();
    let x = wp / temperature;
    if x > MAX_THERMAL_EXPONENT {
        return Err(Error::Domain(format!(
            "omega(t')/T = {x:.3e} exceeds {MAX_THERMAL_EXPONENT}; the weight expansion degenerates"
        )));
    }
    // 2 wp cosh x + gamma sinh x = e^x [(wp + gamma/2) + e^{-2x} (wp - gamma/2)],
    // and gamma >= 2 wp keeps the bracket positive.
    let u = (-2.0 * x).exp();
    let bracket = (wp + 0.5 * su.gamma) + u * (wp - 0.5 * su.gamma);
    let a0 = 4.0 * wp * wp * u / (bracket * bracket);
    let aplus = -su.alpha.conj() * ((1.0 - u) / bracket);
    Ok(AppendixCoefficients { a0, aplus, omega_tprime: wp, temperature })
}

/// Thermal means of the su(1,1) generators under `exp(-H(t')/T)/Z`.
#[derive(Debug, Clone, Copy)]
pub struct KOperatorMeans {
    pub k0: f64,
    pub kplus: Complex64,
}

impl KOperatorMeans {
    pub fn kminus(&self) -> Complex64 {
        self.kplus.conj()
    }
}

/// `<K0> = (1 - A0 + |A+|^2)/(4d)`, `<K+> = A+*/(2d)` with
/// `d = (1 - sqrt(A0))^2 - |A+|^2`.
pub fn k_operator_means(c: &AppendixCoefficients) -> Result<KOperatorMeans> {
    let d = c.denominator();
    if d <= DEGENERACY_FLOOR {
        return Err(Error::Degeneracy(format!(
            "generator-mean denominator {d:.3e} is not safely positive"
        )));
    }
    Ok(KOperatorMeans {
        k0: (1.0 - c.a0 + c.aplus.norm_sqr()) / (4.0 * d),
        kplus: c.aplus.conj() / (2.0 * d),
    })
}

/// Partition function from the weight-expansion coefficients,
/// `Z = A0^{1/4} / sqrt(d)`.
///
/// A degenerate but non-negative denominator falls back to the closed form
/// [`partition_function_closed`], which the expansion equals identically;
/// a negative denominator is a hard error.
pub fn partition_function_appendix(c: &AppendixCoefficients) -> Result<f64> {
    let d = c.denominator();
    if d <= 0.0 {
        return Err(Error::Degeneracy(format!(
            "partition-function denominator {d:.3e} is not positive"
        )));
    }
    if d < DEGENERACY_FLOOR {
        log::warn!(
            "weight-expansion denominator {d:.3e} below {DEGENERACY_FLOOR:.0e}; \
             using the closed-form partition function"
        );
        return partition_function_closed(c.omega_tprime, c.temperature);
    }
    Ok(c.a0.powf(0.25) / d.sqrt())
}

/// `Z = 1/(2 sinh(omega/2T))`, evaluated as `e^{-x/2}/(1 - e^{-x})`.
pub fn partition_function_closed(omega: f64, temperature: f64) -> Result<f64> {
    check_temperature(temperature)?;
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::Domain(format!("omega must be positive, got {omega:.6e}")));
    }
    let x = omega / temperature;
    Ok((-0.5 * x).exp() / -(-x).exp_m1())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::classical::solve_classical;
    use crate::oscillator::profile::FrequencyProfile;

    fn sqrt_ramp_solution() -> ClassicalSolution {
        let p = FrequencyProfile::sqrt_linear(1.0, 0.0).unwrap();
        solve_classical(&p, 12.0, 1e-12).unwrap()
    }

    #[test]
    fn initial_time_coefficients_are_closed_form() {
        let sol = sqrt_ramp_solution();
        for tp in [0.5, 2.0, 7.3] {
            let su = su11_coefficients(&sol, 0.0, tp).unwrap();
            let w2 = tp;
            assert!((su.alpha - Complex64::new(0.5 * (w2 - 1.0), 0.0)).norm() < 1e-12);
            assert!((su.gamma - (1.0 + w2)).abs() < 1e-12);
        }
    }

    #[test]
    fn appendix_z_matches_closed_form_at_any_anchor() {
        let sol = sqrt_ramp_solution();
        let (tp, temp) = (4.0f64, 2.5);
        let z_closed = partition_function_closed(tp.sqrt(), temp).unwrap();
        for t in [0.0, 1.0, 3.7, 9.0] {
            let c = appendix_coefficients(&sol, t, tp, temp).unwrap();
            let z = partition_function_appendix(&c).unwrap();
            assert!(
                (z - z_closed).abs() < 1e-9 * z_closed,
                "anchor t = {t}: {z} vs {z_closed}"
            );
        }
    }

    #[test]
    fn closed_form_z_sanity() {
        // omega = T = 1: Z = 1/(2 sinh 1/2).
        let z = partition_function_closed(1.0, 1.0).unwrap();
        assert!((z - 1.0 / (2.0 * 0.5f64.sinh())).abs() < 1e-14);
    }

    #[test]
    fn rejects_overcold_expansion() {
        let sol = sqrt_ramp_solution();
        assert!(appendix_coefficients(&sol, 1.0, 4.0, 1e-3).is_err());
    }
}
