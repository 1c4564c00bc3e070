//! The complex classical trajectory `eps(t)` of the driven oscillator.
//!
//! `eps'' + omega^2(t) eps = 0` with `eps(0) = 1`, `eps'(0) = i`.  Those
//! initial conditions fix the Wronskian `eps' eps* - eps eps'* = 2i`, which
//! the exact flow conserves; the solver enforces it at every accepted grid
//! point and refuses to return a drifted trajectory.

use num_complex::Complex64;

use super::ode::{integrate, Dopri5Options, Dopri5Solution};
use super::profile::FrequencyProfile;
use crate::error::{Error, Result};

/// Hard ceiling on Wronskian drift at accepted grid points.
pub const WRONSKIAN_BUDGET: f64 = 1e-8;
/// Default local error tolerance for the trajectory solve.
///
/// 1e-10 is not enough: on `omega = sqrt(t)` the drift crosses 1e-8 near
/// t = 23, and the trap profile misses the f(t, t) = 2 identity at the 1e-9
/// level.  1e-12 holds both with an order of magnitude to spare and costs
/// only a few milliseconds out to t = 50.
pub const DEFAULT_TOL: f64 = 1e-12;

/// State layout: `[Re eps, Im eps, Re eps', Im eps']`.
#[derive(Debug, Clone)]
pub struct ClassicalSolution {
    profile: FrequencyProfile,
    sol: Dopri5Solution<4>,
    max_drift: f64,
}

/// Solve the classical equation of motion over `[0, t_max]`.
pub fn solve_classical(
    profile: &FrequencyProfile,
    t_max: f64,
    tol: f64,
) -> Result<ClassicalSolution> {
    if !tol.is_finite() || !(1e-13..=1e-4).contains(&tol) {
        return Err(Error::Domain(format!(
            "solver tolerance must lie in [1e-13, 1e-4], got {tol:.6e}"
        )));
    }
    profile.check_window(t_max)?;
    let opts = Dopri5Options { rtol: tol, atol: tol, ..Default::default() };
    let rhs = |t: f64, y: &[f64; 4]| {
        let w2 = profile.omega_sq(t);
        [y[2], y[3], -w2 * y[0], -w2 * y[1]]
    };
    let sol = integrate(rhs, 0.0, t_max, [1.0, 0.0, 0.0, 1.0], &opts)?;

    let mut max_drift = 0.0f64;
    for (t, y) in sol.grid().iter().zip(sol.states()) {
        let drift = wronskian_drift(y);
        if drift > WRONSKIAN_BUDGET {
            return Err(Error::WronskianDrift { t: *t, drift, budget: WRONSKIAN_BUDGET });
        }
        max_drift = max_drift.max(drift);
    }

    Ok(ClassicalSolution { profile: profile.clone(), sol, max_drift })
}

/// `|W - 2i|` for the state `[Re eps, Im eps, Re eps', Im eps']`.
fn wronskian_drift(y: &[f64; 4]) -> f64 {
    // W = 2i (ad - bc) for eps = a + bi, eps' = c + di.
    2.0 * (y[0] * y[3] - y[1] * y[2] - 1.0).abs()
}

impl ClassicalSolution {
    pub fn profile(&self) -> &FrequencyProfile {
        &self.profile
    }

    pub fn t_max(&self) -> f64 {
        self.sol.t_end()
    }

    pub fn n_steps(&self) -> usize {
        self.sol.n_steps()
    }

    /// Largest Wronskian drift seen on the accepted grid.
    pub fn max_wronskian_drift(&self) -> f64 {
        self.max_drift
    }

    pub fn contains(&self, t: f64) -> bool {
        self.sol.contains(t)
    }

    pub(crate) fn check_in_range(&self, t: f64) -> Result<()> {
        if !t.is_finite() || !self.sol.contains(t) {
            return Err(Error::Domain(format!(
                "t = {t:.6e} lies outside the solved range [0, {:.6e}]",
                self.t_max()
            )));
        }
        Ok(())
    }

    /// `(eps(t), eps'(t))` by dense interpolation.
    pub fn eval(&self, t: f64) -> Result<(Complex64, Complex64)> {
        let y = self.sol.eval(t)?;
        Ok((Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3])))
    }

    /// Wronskian drift at an arbitrary (interpolated) time.
    pub fn wronskian_drift_at(&self, t: f64) -> Result<f64> {
        let y = self.sol.eval(t)?;
        Ok(wronskian_drift(&y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_profile_matches_closed_form() {
        let p = FrequencyProfile::constant(2.0).unwrap();
        let sol = solve_classical(&p, 10.0, 1e-12).unwrap();
        for i in 0..=100 {
            let t = 10.0 * i as f64 / 100.0;
            let (e, de) = sol.eval(t).unwrap();
            // eps = cos(wt) + (i/w) sin(wt) for constant omega = w.
            let expect_e = Complex64::new((2.0 * t).cos(), 0.5 * (2.0 * t).sin());
            let expect_de = Complex64::new(-2.0 * (2.0 * t).sin(), (2.0 * t).cos());
            assert!((e - expect_e).norm() < 1e-9, "eps at t = {t}");
            assert!((de - expect_de).norm() < 1e-9, "eps' at t = {t}");
        }
    }

    #[test]
    fn wronskian_stays_small() {
        let p = FrequencyProfile::sqrt_linear(1.0, 0.0).unwrap();
        let sol = solve_classical(&p, 50.0, DEFAULT_TOL).unwrap();
        assert!(sol.max_wronskian_drift() < WRONSKIAN_BUDGET);
    }

    #[test]
    fn initial_conditions_exact() {
        let p = FrequencyProfile::paul_trap(1.0, 0.5, 2.0).unwrap();
        let sol = solve_classical(&p, 5.0, 1e-10).unwrap();
        let (e, de) = sol.eval(0.0).unwrap();
        assert_eq!(e, Complex64::new(1.0, 0.0));
        assert_eq!(de, Complex64::new(0.0, 1.0));
    }

    #[test]
    fn rejects_bad_tolerance() {
        let p = FrequencyProfile::constant(1.0).unwrap();
        assert!(solve_classical(&p, 1.0, 1e-3).is_err());
        assert!(solve_classical(&p, 1.0, 1e-15).is_err());
    }
}
