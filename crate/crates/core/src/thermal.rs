//! Canonical and grand-canonical Gibbs states, exact entropy and
//! free-energy differences between two of them, and the two-sided bounds
//! generated by positivity of the relative entropy.
//!
//! Every bound family comes in a lower/exact/upper triple: the slack on each
//! side of the sandwich is exactly a relative entropy between the two states,
//! which is what makes the ordering a theorem rather than an estimate.  The
//! constructors validate the ordering numerically anyway and refuse to return
//! a violated sandwich.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{
    boltzmann_weight, eigendecompose, mean_value, shifted_weights, CMatrix, HermitianOperator,
};
use crate::{MIN_TEMPERATURE, PROBABILITY_FLOOR};

/// Tolerance for the sandwich ordering `lower <= exact <= upper`.
pub const SANDWICH_TOL: f64 = 1e-9;
/// Tolerance for the per-state identity `S = E/T + ln Z`.
pub const STATE_IDENTITY_TOL: f64 = 1e-9;
/// Tolerance for agreement between the cross-trace route and the
/// difference-operator route to the same bound.
pub const DUAL_ROUTE_TOL: f64 = 1e-10;
/// Tolerance for the two routes to the exact entropy difference.
pub const EXACT_ROUTE_TOL: f64 = 1e-9;
/// Tolerance on the trace of a constructed Gibbs state.
pub const STATE_TRACE_TOL: f64 = 1e-10;

fn check_temperature(t: f64) -> Result<()> {
    if !t.is_finite() || t < MIN_TEMPERATURE {
        return Err(Error::Domain(format!(
            "temperature must be finite and >= {MIN_TEMPERATURE:.0e}, got {t:.6e}"
        )));
    }
    Ok(())
}

/// `-sum p ln p` with probabilities below the floor treated as exact zeros.
pub fn entropy_of_probabilities(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p >= PROBABILITY_FLOOR)
        .map(|&p| -p * p.ln())
        .sum()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ThermalSpecWire {
    #[serde(rename = "H")]
    h: HermitianOperator,
    #[serde(rename = "T")]
    temperature: f64,
}

/// A Hamiltonian together with a temperature in natural units
/// (`k_B = hbar = 1`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ThermalSpecWire", into = "ThermalSpecWire")]
pub struct ThermalSpec {
    h: HermitianOperator,
    temperature: f64,
}

impl ThermalSpec {
    pub fn new(h: HermitianOperator, temperature: f64) -> Result<Self> {
        check_temperature(temperature)?;
        Ok(Self { h, temperature })
    }

    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.h
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }
}

impl TryFrom<ThermalSpecWire> for ThermalSpec {
    type Error = Error;
    fn try_from(w: ThermalSpecWire) -> Result<Self> {
        Self::new(w.h, w.temperature)
    }
}

impl From<ThermalSpec> for ThermalSpecWire {
    fn from(s: ThermalSpec) -> Self {
        ThermalSpecWire { h: s.h, temperature: s.temperature }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GrandThermalSpecWire {
    #[serde(rename = "H")]
    h: HermitianOperator,
    #[serde(rename = "N")]
    n: HermitianOperator,
    #[serde(rename = "T")]
    temperature: f64,
    mu: f64,
}

/// Hamiltonian, particle-number operator, temperature, and chemical
/// potential for a grand-canonical ensemble.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "GrandThermalSpecWire", into = "GrandThermalSpecWire")]
pub struct GrandThermalSpec {
    h: HermitianOperator,
    n: HermitianOperator,
    temperature: f64,
    mu: f64,
}

impl GrandThermalSpec {
    pub fn new(h: HermitianOperator, n: HermitianOperator, temperature: f64, mu: f64) -> Result<Self> {
        check_temperature(temperature)?;
        if h.dim() != n.dim() {
            return Err(Error::DimensionMismatch { left: h.dim(), right: n.dim() });
        }
        if !mu.is_finite() {
            return Err(Error::InvalidInput("chemical potential must be finite".into()));
        }
        Ok(Self { h, n, temperature, mu })
    }

    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.h
    }

    pub fn number_operator(&self) -> &HermitianOperator {
        &self.n
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    /// `mu N - H`, the operator whose exponential generates the ensemble.
    pub fn weight_generator(&self) -> HermitianOperator {
        HermitianOperator::linear_combination(self.mu, &self.n, -1.0, &self.h)
            .expect("dimensions checked at construction")
    }
}

impl TryFrom<GrandThermalSpecWire> for GrandThermalSpec {
    type Error = Error;
    fn try_from(w: GrandThermalSpecWire) -> Result<Self> {
        Self::new(w.h, w.n, w.temperature, w.mu)
    }
}

impl From<GrandThermalSpec> for GrandThermalSpecWire {
    fn from(s: GrandThermalSpec) -> Self {
        GrandThermalSpecWire { h: s.h, n: s.n, temperature: s.temperature, mu: s.mu }
    }
}

/// A constructed thermal state.
///
/// `ln_z` is the primary stored quantity; `z()` is derived from it and may
/// overflow to infinity for extreme parameters while `ln_z` stays finite.
/// `generator` here means the operator in the exponent: `H` for canonical
/// states, `H - mu N` for grand-canonical ones.
#[derive(Debug, Clone)]
pub struct ThermalState {
    rho: CMatrix,
    probabilities: Vec<f64>,
    basis: CMatrix,
    generator_eigenvalues: Vec<f64>,
    temperature: f64,
    ln_z: f64,
    energy: f64,
    entropy: f64,
}

impl ThermalState {
    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn ln_z(&self) -> f64 {
        self.ln_z
    }

    pub fn z(&self) -> f64 {
        self.ln_z.exp()
    }

    /// Mean of the physical Hamiltonian.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn entropy(&self) -> f64 {
        self.entropy
    }

    pub fn free_energy(&self) -> f64 {
        -self.temperature * self.ln_z
    }

    /// `E + T (ln Z - S)`; zero for canonical states, `mu <N>` for
    /// grand-canonical ones.
    pub fn gibbs_potential(&self) -> f64 {
        self.energy + self.temperature * (self.ln_z - self.entropy)
    }

    /// Eigenbasis populations of the weight generator, ascending order.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn generator_eigenvalues(&self) -> &[f64] {
        &self.generator_eigenvalues
    }

    /// Mean of this state's weight generator in an arbitrary state `rho`.
    fn generator_mean_in(&self, rho: &CMatrix) -> f64 {
        let v = &self.basis;
        let m = v.adjoint() * rho * v;
        self.generator_eigenvalues
            .iter()
            .enumerate()
            .map(|(l, k)| k * m[(l, l)].re)
            .sum()
    }
}

fn build_state(
    generator: &HermitianOperator,
    physical_h: &HermitianOperator,
    temperature: f64,
) -> Result<ThermalState> {
    let beta = 1.0 / temperature;
    let sd = eigendecompose(generator)?;
    let (weights, shift) = shifted_weights(sd.eigenvalues().as_slice(), beta);
    let trace: f64 = weights.iter().sum();
    if !trace.is_finite() || trace <= 0.0 {
        return Err(Error::Degeneracy(format!(
            "partition function trace evaluated to {trace:.3e}"
        )));
    }
    let probabilities: Vec<f64> = weights.iter().map(|w| w / trace).collect();
    let n = generator.dim();
    let diag = CMatrix::from_fn(n, n, |i, j| {
        if i == j { Complex64::new(probabilities[i], 0.0) } else { Complex64::new(0.0, 0.0) }
    });
    let raw = sd.eigenvectors() * diag * sd.eigenvectors().adjoint();
    let rho = (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0);

    let state_trace: f64 = (0..n).map(|i| rho[(i, i)].re).sum();
    if (state_trace - 1.0).abs() > STATE_TRACE_TOL {
        return Err(Error::Inconsistency {
            what: "Gibbs state trace deviates from 1".into(),
            magnitude: (state_trace - 1.0).abs(),
            tolerance: STATE_TRACE_TOL,
        });
    }

    let ln_z = trace.ln() - beta * shift;
    let energy = mean_value(&rho, physical_h)?;
    let entropy = entropy_of_probabilities(&probabilities);

    let generator_mean: f64 = probabilities
        .iter()
        .zip(sd.eigenvalues().iter())
        .map(|(p, l)| p * l)
        .sum();
    let identity_gap = (entropy - (beta * generator_mean + ln_z)).abs();
    if identity_gap > STATE_IDENTITY_TOL {
        return Err(Error::Inconsistency {
            what: "thermal identity S = <G>/T + ln Z failed".into(),
            magnitude: identity_gap,
            tolerance: STATE_IDENTITY_TOL,
        });
    }

    Ok(ThermalState {
        rho,
        probabilities,
        basis: sd.eigenvectors().clone(),
        generator_eigenvalues: sd.eigenvalues().as_slice().to_vec(),
        temperature,
        ln_z,
        energy,
        entropy,
    })
}

/// Canonical Gibbs state `exp(-H/T) / Z`.
pub fn gibbs_state(spec: &ThermalSpec) -> Result<ThermalState> {
    build_state(&spec.h, &spec.h, spec.temperature)
}

/// Grand-canonical state `exp(-(H - mu N)/T) / Z`.
///
/// The reported `energy` is the mean of the physical Hamiltonian, not of the
/// weight generator.
pub fn grand_gibbs_state(spec: &GrandThermalSpec) -> Result<ThermalState> {
    let k = HermitianOperator::linear_combination(1.0, &spec.h, -spec.mu, &spec.n)?;
    build_state(&k, &spec.h, spec.temperature)
}

/// Relative entropy `D(rho || sigma) = Tr rho (ln rho - ln sigma)`.
///
/// Evaluated through the generator of `sigma` rather than its matrix
/// logarithm, so underflowed populations of `sigma` cannot poison the
/// result.  Non-negative up to rounding for any pair of states.
pub fn relative_entropy(rho: &ThermalState, sigma: &ThermalState) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { left: rho.dim(), right: sigma.dim() });
    }
    let beta_sigma = 1.0 / sigma.temperature;
    let cross = sigma.generator_mean_in(&rho.rho);
    Ok(-rho.entropy + beta_sigma * cross + sigma.ln_z)
}

/// Lower/exact/upper triple for one bounded quantity.
///
/// `slack_lower = exact - lower` and `slack_upper = upper - exact`, clamped
/// at zero.  `validated` records whether the sandwich ordering was enforced
/// at construction; it is false only for results built from truncated
/// overlap data, where the ordering theorem does not apply.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundsResult {
    pub lower: f64,
    pub exact: Option<f64>,
    pub upper: f64,
    pub slack_lower: Option<f64>,
    pub slack_upper: Option<f64>,
    pub validated: bool,
}

impl BoundsResult {
    /// Build a result and enforce `lower <= exact <= upper` within
    /// [`SANDWICH_TOL`].
    pub fn checked(lower: f64, exact: f64, upper: f64) -> Result<Self> {
        if !lower.is_finite() || !exact.is_finite() || !upper.is_finite() {
            return Err(Error::Degeneracy(format!(
                "bound triple evaluated non-finite: {lower:.6e}, {exact:.6e}, {upper:.6e}"
            )));
        }
        if lower > upper + SANDWICH_TOL || exact < lower - SANDWICH_TOL || exact > upper + SANDWICH_TOL
        {
            return Err(Error::SandwichViolation { lower, exact, upper });
        }
        Ok(Self {
            lower,
            exact: Some(exact),
            upper,
            slack_lower: Some((exact - lower).max(0.0)),
            slack_upper: Some((upper - exact).max(0.0)),
            validated: true,
        })
    }

    /// Build a result without enforcing the ordering.
    pub fn unchecked(lower: f64, exact: Option<f64>, upper: f64) -> Self {
        Self {
            lower,
            exact,
            upper,
            slack_lower: exact.map(|e| (e - lower).max(0.0)),
            slack_upper: exact.map(|e| (upper - e).max(0.0)),
            validated: false,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Exact entropy difference `S_2 - S_1`, cross-checked against the
/// energy/partition-function route.
pub fn delta_s_exact(s1: &ThermalSpec, s2: &ThermalSpec) -> Result<f64> {
    let st1 = gibbs_state(s1)?;
    let st2 = gibbs_state(s2)?;
    let direct = st2.entropy - st1.entropy;
    let via_energy = st2.energy / st2.temperature - st1.energy / st1.temperature + st2.ln_z
        - st1.ln_z;
    let gap = (direct - via_energy).abs();
    if gap > EXACT_ROUTE_TOL {
        return Err(Error::Inconsistency {
            what: "entropy-difference routes disagree".into(),
            magnitude: gap,
            tolerance: EXACT_ROUTE_TOL,
        });
    }
    Ok(direct)
}

fn require_same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

fn check_dual_route(label: &str, primary: f64, alternate: f64) -> Result<()> {
    let gap = (primary - alternate).abs();
    if gap > DUAL_ROUTE_TOL {
        return Err(Error::Inconsistency {
            what: format!("{label}: cross-trace and difference-operator routes disagree"),
            magnitude: gap,
            tolerance: DUAL_ROUTE_TOL,
        });
    }
    Ok(())
}

/// Two-sided bounds on the entropy difference `S_2 - S_1`.
///
/// The bounds are tight exactly when `rho_1 = rho_2`; the lower slack equals
/// `D(rho_1 || rho_2)` and the upper slack equals `D(rho_2 || rho_1)`.  Both
/// bounds are evaluated twice, from the cross traces and from the
/// difference operator, and the routes must agree within [`DUAL_ROUTE_TOL`].
pub fn delta_s_bounds(s1: &ThermalSpec, s2: &ThermalSpec) -> Result<BoundsResult> {
    require_same_dim(s1.dim(), s2.dim())?;
    let st1 = gibbs_state(s1)?;
    let st2 = gibbs_state(s2)?;
    let t1 = s1.temperature;
    let t2 = s2.temperature;

    let cross12 = mean_value(&st1.rho, &s2.h)?;
    let cross21 = mean_value(&st2.rho, &s1.h)?;
    let lower = (st2.energy - cross12) / t2;
    let upper = (cross21 - st1.energy) / t1;

    let dh = HermitianOperator::difference(&s2.h, &s1.h)?;
    let de = st2.energy - st1.energy;
    check_dual_route("lower bound", lower, (de - mean_value(&st1.rho, &dh)?) / t2)?;
    check_dual_route("upper bound", upper, (de - mean_value(&st2.rho, &dh)?) / t1)?;

    BoundsResult::checked(lower, st2.entropy - st1.entropy, upper)
}

/// Two-sided bounds on `ln(Z_2 / Z_1)`.
pub fn log_z_ratio_bounds(s1: &ThermalSpec, s2: &ThermalSpec) -> Result<BoundsResult> {
    require_same_dim(s1.dim(), s2.dim())?;
    let st1 = gibbs_state(s1)?;
    let st2 = gibbs_state(s2)?;
    let d_op =
        HermitianOperator::linear_combination(1.0 / s1.temperature, &s1.h, -1.0 / s2.temperature, &s2.h)?;
    let lower = mean_value(&st1.rho, &d_op)?;
    let upper = mean_value(&st2.rho, &d_op)?;
    BoundsResult::checked(lower, st2.ln_z - st1.ln_z, upper)
}

/// Two-sided bounds on `F_1/T_1 - F_2/T_2`, which coincides with
/// `ln(Z_2/Z_1)` through `F = -T ln Z`.
pub fn helmholtz_bounds(s1: &ThermalSpec, s2: &ThermalSpec) -> Result<BoundsResult> {
    require_same_dim(s1.dim(), s2.dim())?;
    let st1 = gibbs_state(s1)?;
    let st2 = gibbs_state(s2)?;
    let d_op =
        HermitianOperator::linear_combination(1.0 / s1.temperature, &s1.h, -1.0 / s2.temperature, &s2.h)?;
    let lower = mean_value(&st1.rho, &d_op)?;
    let upper = mean_value(&st2.rho, &d_op)?;
    let exact = st1.free_energy() / st1.temperature - st2.free_energy() / st2.temperature;
    BoundsResult::checked(lower, exact, upper)
}

/// Entropy-difference bounds evaluated term by term for Hamiltonians given
/// as kinetic plus potential parts, `H_j = K_j + V_j`.
///
/// The per-term sums must match the full-operator route within
/// [`DUAL_ROUTE_TOL`].
pub fn kinetic_potential_bounds(
    k1: &HermitianOperator,
    v1: &HermitianOperator,
    k2: &HermitianOperator,
    v2: &HermitianOperator,
    t1: f64,
    t2: f64,
) -> Result<BoundsResult> {
    require_same_dim(k1.dim(), v1.dim())?;
    require_same_dim(k2.dim(), v2.dim())?;
    require_same_dim(k1.dim(), k2.dim())?;
    let h1 = HermitianOperator::linear_combination(1.0, k1, 1.0, v1)?;
    let h2 = HermitianOperator::linear_combination(1.0, k2, 1.0, v2)?;
    let s1 = ThermalSpec::new(h1, t1)?;
    let s2 = ThermalSpec::new(h2, t2)?;
    let st1 = gibbs_state(&s1)?;
    let st2 = gibbs_state(&s2)?;

    let lower = (mean_value(&st2.rho, k2)? - mean_value(&st1.rho, k2)?
        + mean_value(&st2.rho, v2)?
        - mean_value(&st1.rho, v2)?)
        / t2;
    let upper = (mean_value(&st2.rho, k1)? - mean_value(&st1.rho, k1)?
        + mean_value(&st2.rho, v1)?
        - mean_value(&st1.rho, v1)?)
        / t1;

    let full = delta_s_bounds(&s1, &s2)?;
    check_dual_route("split lower bound", lower, full.lower)?;
    check_dual_route("split upper bound", upper, full.upper)?;

    BoundsResult::checked(lower, st2.entropy - st1.entropy, upper)
}

/// How far an arbitrary state's entropy sits below the grand-canonical
/// ceiling: `ln Zeta - Tr(rho (mu N - H))/T - S(rho)`.
///
/// Non-negative for every valid density matrix, with equality exactly at the
/// grand-canonical state.
pub fn grand_entropy_gap(rho: &CMatrix, spec: &GrandThermalSpec) -> Result<f64> {
    if rho.nrows() != rho.ncols() {
        return Err(Error::DimensionMismatch { left: rho.nrows(), right: rho.ncols() });
    }
    require_same_dim(rho.nrows(), spec.dim())?;
    let sym = (rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    let asym = (rho - rho.adjoint()).iter().fold(0.0f64, |a, z| a.max(z.norm()));
    if asym > crate::spectral::DENSITY_HERMITICITY_TOL * 2.0 {
        return Err(Error::NotHermitian {
            max_asymmetry: asym,
            tolerance: crate::spectral::DENSITY_HERMITICITY_TOL * 2.0,
        });
    }
    let herm = HermitianOperator::from_matrix_unchecked(sym.clone());
    let sd = eigendecompose(&herm)?;
    let mut s_rho = 0.0;
    for &p in sd.eigenvalues().iter() {
        if p < -1e-8 {
            return Err(Error::InvalidInput(format!(
                "density matrix has negative eigenvalue {p:.3e}"
            )));
        }
        if p >= PROBABILITY_FLOOR {
            s_rho -= p * p.ln();
        }
    }
    let state = grand_gibbs_state(spec)?;
    let ktilde = spec.weight_generator();
    let cross = mean_value(&sym, &ktilde)?;
    Ok(state.ln_z - cross / spec.temperature - s_rho)
}

/// Cross expectation values between two grand-canonical ensembles,
/// exposed for diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct GrandCrossMeans {
    pub rho1_h2: f64,
    pub rho1_n2: f64,
    pub rho2_h1: f64,
    pub rho2_n1: f64,
}

pub fn grand_cross_means(g1: &GrandThermalSpec, g2: &GrandThermalSpec) -> Result<GrandCrossMeans> {
    require_same_dim(g1.dim(), g2.dim())?;
    let st1 = grand_gibbs_state(g1)?;
    let st2 = grand_gibbs_state(g2)?;
    Ok(GrandCrossMeans {
        rho1_h2: mean_value(st1.rho(), g2.hamiltonian())?,
        rho1_n2: mean_value(st1.rho(), g2.number_operator())?,
        rho2_h1: mean_value(st2.rho(), g1.hamiltonian())?,
        rho2_n1: mean_value(st2.rho(), g1.number_operator())?,
    })
}

/// Two-sided bounds on the entropy difference between two grand-canonical
/// states, expressed through their Gibbs potentials `G = E + T(ln Zeta - S)`.
pub fn grand_delta_s_bounds(g1: &GrandThermalSpec, g2: &GrandThermalSpec) -> Result<BoundsResult> {
    require_same_dim(g1.dim(), g2.dim())?;
    let st1 = grand_gibbs_state(g1)?;
    let st2 = grand_gibbs_state(g2)?;
    let kt1 = g1.weight_generator();
    let kt2 = g2.weight_generator();
    let cross12 = mean_value(st1.rho(), &kt2)?;
    let cross21 = mean_value(st2.rho(), &kt1)?;

    let lower = (cross12 - st2.gibbs_potential() + st2.energy) / g2.temperature();
    let upper = (st1.gibbs_potential() - st1.energy - cross21) / g1.temperature();
    BoundsResult::checked(lower, st2.entropy - st1.entropy, upper)
}

/// Two-sided bounds on `ln(Zeta_2 / Zeta_1)` for grand-canonical ensembles.
pub fn grand_log_z_ratio_bounds(
    g1: &GrandThermalSpec,
    g2: &GrandThermalSpec,
) -> Result<BoundsResult> {
    require_same_dim(g1.dim(), g2.dim())?;
    let st1 = grand_gibbs_state(g1)?;
    let st2 = grand_gibbs_state(g2)?;
    let kt1 = g1.weight_generator();
    let kt2 = g2.weight_generator();
    let cross12 = mean_value(st1.rho(), &kt2)?;
    let cross21 = mean_value(st2.rho(), &kt1)?;

    let lower = (st1.energy - st1.gibbs_potential()) / g1.temperature() + cross12 / g2.temperature();
    let upper = (st2.gibbs_potential() - st2.energy) / g2.temperature() - cross21 / g1.temperature();
    BoundsResult::checked(lower, st2.ln_z - st1.ln_z, upper)
}

/// Convenience wrapper retaining the raw Boltzmann data of a canonical spec.
pub fn partition_data(spec: &ThermalSpec) -> Result<crate::spectral::BoltzmannWeight> {
    boltzmann_weight(&spec.h, 1.0 / spec.temperature)
}
