//! Adaptive Dormand-Prince 5(4) integration with dense output.
//!
//! Coefficient tables and the quartic interpolant follow Hairer, Norsett &
//! Wanner, "Solving Ordinary Differential Equations I" (the DOPRI5 code).
//! The state is a fixed-size array so the oscillator's 4-component real
//! system integrates without allocation in the inner loop.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A21: f64 = 0.2;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;

#[derive(Debug, Clone, Copy)]
pub struct Dopri5Options {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub h_max: Option<f64>,
}

impl Default for Dopri5Options {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-10, max_steps: 5_000_000, h_max: None }
    }
}

/// One accepted step's interpolation data.
#[derive(Debug, Clone)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub h: f64,
    cont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    /// Evaluate the quartic interpolant at fraction `s = (t - t0)/h`.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let mut y = [0.0; N];
        for i in 0..N {
            let c = &self.cont;
            y[i] = c[0][i] + s * (c[1][i] + s1 * (c[2][i] + s * (c[3][i] + s1 * c[4][i])));
        }
        y
    }
}

#[derive(Debug, Clone)]
pub struct Dopri5Solution<const N: usize> {
    ts: Vec<f64>,
    ys: Vec<[f64; N]>,
    steps: Vec<DenseStep<N>>,
}

impl<const N: usize> Dopri5Solution<N> {
    pub fn t_start(&self) -> f64 {
        self.ts[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.ts.last().unwrap()
    }

    /// Accepted grid times.
    pub fn grid(&self) -> &[f64] {
        &self.ts
    }

    /// States at the accepted grid times.
    pub fn states(&self) -> &[[f64; N]] {
        &self.ys
    }

    pub fn n_steps(&self) -> usize {
        self.steps.len()
    }

    pub fn contains(&self, t: f64) -> bool {
        let slack = 1e-12 * (1.0 + self.t_end().abs());
        t >= self.t_start() - slack && t <= self.t_end() + slack
    }

    /// Dense evaluation anywhere in the solved range.
    pub fn eval(&self, t: f64) -> Result<[f64; N]> {
        if !t.is_finite() || !self.contains(t) {
            return Err(Error::Domain(format!(
                "t = {t:.6e} lies outside the solved range [{:.6e}, {:.6e}]",
                self.t_start(),
                self.t_end()
            )));
        }
        let t = t.clamp(self.t_start(), self.t_end());
        // Index of the first grid point strictly greater than t, minus one.
        let idx = match self.ts.binary_search_by(|probe| probe.partial_cmp(&t).unwrap()) {
            Ok(i) => return Ok(self.ys[i]),
            Err(i) => (i - 1).min(self.steps.len() - 1),
        };
        Ok(self.steps[idx].eval(t))
    }
}

/// Integrate `y' = f(t, y)` from `t0` to `t_end > t0`.
pub fn integrate<const N: usize, F>(
    f: F,
    t0: f64,
    t_end: f64,
    y0: [f64; N],
    opts: &Dopri5Options,
) -> Result<Dopri5Solution<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if !t0.is_finite() || !t_end.is_finite() || t_end <= t0 {
        return Err(Error::Domain(format!("need t_end > t0, got [{t0:.6e}, {t_end:.6e}]")));
    }
    if !opts.rtol.is_finite() || !opts.atol.is_finite() || opts.rtol <= 0.0 || opts.atol <= 0.0 {
        return Err(Error::Domain("tolerances must be positive".into()));
    }
    let h_max = opts.h_max.unwrap_or(t_end - t0).min(t_end - t0);

    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = initial_step(&f, t0, &y0, &k1, t_end, opts).min(h_max);

    let mut ts = vec![t0];
    let mut ys = vec![y0];
    let mut steps: Vec<DenseStep<N>> = Vec::new();
    let mut total_steps = 0usize;
    let mut just_rejected = false;

    while t < t_end {
        total_steps += 1;
        if total_steps > opts.max_steps {
            return Err(Error::TooManySteps { max_steps: opts.max_steps });
        }
        if h < 1e-14 * (1.0 + t.abs()) {
            return Err(Error::StepSizeUnderflow { t });
        }
        if t + h > t_end {
            h = t_end - t;
        }

        let mut yt = [0.0; N];
        for i in 0..N {
            yt[i] = y[i] + h * A21 * k1[i];
        }
        let k2 = f(t + C[1] * h, &yt);
        for i in 0..N {
            yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        let k3 = f(t + C[2] * h, &yt);
        for i in 0..N {
            yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        let k4 = f(t + C[3] * h, &yt);
        for i in 0..N {
            yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        let k5 = f(t + C[4] * h, &yt);
        for i in 0..N {
            yt[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let k6 = f(t + C[5] * h, &yt);
        let mut y_new = [0.0; N];
        for i in 0..N {
            y_new[i] =
                y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        let k7 = f(t + h, &y_new);

        let mut err_sq = 0.0;
        for i in 0..N {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / sc) * (e / sc);
        }
        let err = (err_sq / N as f64).sqrt();

        if err <= 1.0 {
            let mut cont = [[0.0; N]; 5];
            for i in 0..N {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                cont[0][i] = y[i];
                cont[1][i] = ydiff;
                cont[2][i] = bspl;
                cont[3][i] = ydiff - h * k7[i] - bspl;
                cont[4][i] = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                        + D7 * k7[i]);
            }
            steps.push(DenseStep { t0: t, h, cont });
            t += h;
            y = y_new;
            k1 = k7;
            ts.push(t);
            ys.push(y);

            let fac_max = if just_rejected { 1.0 } else { FAC_MAX };
            let fac = if err == 0.0 {
                fac_max
            } else {
                (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, fac_max)
            };
            h = (h * fac).min(h_max);
            just_rejected = false;
        } else {
            h *= (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, 1.0);
            just_rejected = true;
        }
    }

    Ok(Dopri5Solution { ts, ys, steps })
}

/// Hairer's starting-step heuristic.
fn initial_step<const N: usize, F>(
    f: &F,
    t0: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    t_end: f64,
    opts: &Dopri5Options,
) -> f64
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let sc: Vec<f64> = (0..N).map(|i| opts.atol + opts.rtol * y0[i].abs()).collect();
    let d0 = rms(y0, &sc);
    let d1 = rms(f0, &sc);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(t_end - t0);

    let mut y1 = [0.0; N];
    for i in 0..N {
        y1[i] = y0[i] + h0 * f0[i];
    }
    let f1 = f(t0 + h0, &y1);
    let mut df = [0.0; N];
    for i in 0..N {
        df[i] = f1[i] - f0[i];
    }
    let d2 = rms(&df, &sc) / h0;

    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(t_end - t0)
}

fn rms<const N: usize>(v: &[f64; N], sc: &[f64]) -> f64 {
    let s: f64 = (0..N).map(|i| (v[i] / sc[i]) * (v[i] / sc[i])).sum();
    (s / N as f64).sqrt()
}
