//! Time-dependent frequency profiles `omega(t)` for the driven oscillator.
//!
//! Profiles are evaluated through `omega^2(t)`, which is the quantity the
//! classical equation of motion needs and the only one that must stay
//! meaningful at an isolated zero of `omega` (the `sqrt_linear` profile with
//! zero offset starts at `omega(0) = 0`).

use crate::error::{Error, Result};

/// Number of samples used when vetting a profile over a solve window.
const WINDOW_SAMPLES: usize = 2048;

#[derive(Debug, Clone)]
pub enum FrequencyProfile {
    /// `omega(t) = omega0`.
    Constant { omega0: f64 },
    /// `omega(t) = omega0 * sqrt(eta + t)`; `eta = 0` gives the bare
    /// square-root ramp.
    SqrtLinear { omega0: f64, eta: f64 },
    /// `omega^2(t) = omega0^2 (1 + eta cos(drive t))`, the trap modulation;
    /// `|eta| < 1` keeps the squared frequency positive.
    PaulTrap { omega0: f64, eta: f64, drive: f64 },
    /// Monotone-cubic interpolation of tabulated `(t, omega)` samples.
    Tabulated(TabulatedProfile),
}

impl FrequencyProfile {
    pub fn constant(omega0: f64) -> Result<Self> {
        if !omega0.is_finite() || omega0 <= 0.0 {
            return Err(Error::Domain(format!("omega0 must be positive, got {omega0:.6e}")));
        }
        Ok(Self::Constant { omega0 })
    }

    pub fn sqrt_linear(omega0: f64, eta: f64) -> Result<Self> {
        if !omega0.is_finite() || omega0 <= 0.0 {
            return Err(Error::Domain(format!("omega0 must be positive, got {omega0:.6e}")));
        }
        if !eta.is_finite() || eta < 0.0 {
            return Err(Error::Domain(format!("offset eta must be >= 0, got {eta:.6e}")));
        }
        Ok(Self::SqrtLinear { omega0, eta })
    }

    pub fn paul_trap(omega0: f64, eta: f64, drive: f64) -> Result<Self> {
        if !omega0.is_finite() || omega0 <= 0.0 {
            return Err(Error::Domain(format!("omega0 must be positive, got {omega0:.6e}")));
        }
        if !eta.is_finite() || eta.abs() >= 1.0 {
            return Err(Error::Domain(format!(
                "modulation depth must satisfy |eta| < 1, got {eta:.6e}"
            )));
        }
        if !drive.is_finite() || drive <= 0.0 {
            return Err(Error::Domain(format!("drive frequency must be positive, got {drive:.6e}")));
        }
        Ok(Self::PaulTrap { omega0, eta, drive })
    }

    pub fn tabulated(ts: Vec<f64>, omegas: Vec<f64>) -> Result<Self> {
        Ok(Self::Tabulated(TabulatedProfile::new(ts, omegas)?))
    }

    pub fn omega_sq(&self, t: f64) -> f64 {
        match self {
            Self::Constant { omega0 } => omega0 * omega0,
            Self::SqrtLinear { omega0, eta } => omega0 * omega0 * (eta + t),
            Self::PaulTrap { omega0, eta, drive } => {
                omega0 * omega0 * (1.0 + eta * (drive * t).cos())
            }
            Self::Tabulated(tab) => tab.eval(t),
        }
    }

    /// `omega(t)`; errors where the frequency is not strictly positive,
    /// which is where the thermal closed forms stop making sense.
    pub fn omega(&self, t: f64) -> Result<f64> {
        let w2 = self.omega_sq(t);
        if !w2.is_finite() || w2 <= 0.0 {
            return Err(Error::Domain(format!(
                "frequency is not positive at t = {t:.6e} (omega^2 = {w2:.6e})"
            )));
        }
        Ok(w2.sqrt())
    }

    /// Vet the profile over `[0, t_max]`: finite, `omega^2 >= 0` everywhere
    /// sampled, and for tabulated data full coverage of the window.
    pub fn check_window(&self, t_max: f64) -> Result<()> {
        if !t_max.is_finite() || t_max <= 0.0 {
            return Err(Error::Domain(format!("t_max must be positive, got {t_max:.6e}")));
        }
        if let Self::Tabulated(tab) = self {
            if tab.t_first() > 0.0 || tab.t_last() < t_max {
                return Err(Error::Domain(format!(
                    "tabulated profile covers [{:.6e}, {:.6e}] but the window is [0, {t_max:.6e}]",
                    tab.t_first(),
                    tab.t_last()
                )));
            }
        }
        for i in 0..=WINDOW_SAMPLES {
            let t = t_max * i as f64 / WINDOW_SAMPLES as f64;
            let w2 = self.omega_sq(t);
            if !w2.is_finite() || w2 < 0.0 {
                return Err(Error::Domain(format!(
                    "omega^2 = {w2:.6e} at t = {t:.6e}; inverted profiles are out of scope"
                )));
            }
        }
        Ok(())
    }

    /// Short machine-readable description used in output headers.
    pub fn describe(&self) -> String {
        match self {
            Self::Constant { omega0 } => format!("constant omega0={omega0}"),
            Self::SqrtLinear { omega0, eta } => format!("sqrt_linear omega0={omega0} eta={eta}"),
            Self::PaulTrap { omega0, eta, drive } => {
                format!("paul_trap omega0={omega0} eta={eta} drive={drive}")
            }
            Self::Tabulated(tab) => format!("tabulated points={}", tab.len()),
        }
    }
}

/// Piecewise-cubic monotone (Fritsch-Carlson) interpolant of `omega^2(t)`.
#[derive(Debug, Clone)]
pub struct TabulatedProfile {
    ts: Vec<f64>,
    w2: Vec<f64>,
    slopes: Vec<f64>,
}

impl TabulatedProfile {
    pub fn new(ts: Vec<f64>, omegas: Vec<f64>) -> Result<Self> {
        if ts.len() != omegas.len() {
            return Err(Error::DimensionMismatch { left: ts.len(), right: omegas.len() });
        }
        if ts.len() < 2 {
            return Err(Error::InvalidInput("tabulated profile needs at least 2 samples".into()));
        }
        if ts.iter().any(|t| !t.is_finite()) || omegas.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidInput("tabulated samples must be finite".into()));
        }
        if ts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("sample times must be strictly increasing".into()));
        }
        if omegas.iter().any(|w| *w <= 0.0) {
            return Err(Error::Domain("tabulated frequencies must be positive".into()));
        }
        let w2: Vec<f64> = omegas.iter().map(|w| w * w).collect();
        let slopes = fritsch_carlson_slopes(&ts, &w2);
        Ok(Self { ts, w2, slopes })
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn t_first(&self) -> f64 {
        self.ts[0]
    }

    pub fn t_last(&self) -> f64 {
        *self.ts.last().unwrap()
    }

    /// Evaluate `omega^2`; clamps to the end values outside the table.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= self.t_first() {
            return self.w2[0];
        }
        if t >= self.t_last() {
            return *self.w2.last().unwrap();
        }
        let idx = match self.ts.binary_search_by(|probe| probe.partial_cmp(&t).unwrap()) {
            Ok(i) => return self.w2[i],
            Err(i) => i - 1,
        };
        let h = self.ts[idx + 1] - self.ts[idx];
        let s = t - self.ts[idx];
        let delta = (self.w2[idx + 1] - self.w2[idx]) / h;
        let (m0, m1) = (self.slopes[idx], self.slopes[idx + 1]);
        let c2 = (3.0 * delta - 2.0 * m0 - m1) / h;
        let c3 = (m0 + m1 - 2.0 * delta) / (h * h);
        self.w2[idx] + s * (m0 + s * (c2 + s * c3))
    }
}

/// Shape-preserving slopes: zero at local extrema, weighted harmonic means
/// on monotone runs, clamped one-sided estimates at the ends.
fn fritsch_carlson_slopes(ts: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = ts.len();
    let h: Vec<f64> = ts.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = ys.windows(2).zip(&h).map(|(w, h)| (w[1] - w[0]) / h).collect();
    if n == 2 {
        return vec![delta[0], delta[0]];
    }
    let mut m = vec![0.0; n];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    m[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    m
}

fn edge_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}
