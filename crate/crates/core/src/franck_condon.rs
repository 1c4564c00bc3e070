//! Entropy and free-energy bounds driven by vibrational overlap
//! (Franck-Condon) factors between two level systems.
//!
//! When both systems carry a complete eigenbasis the overlap matrix
//! `k[j][l] = |<j_1 | l_2>|^2` is doubly stochastic and the cross means it
//! produces are exactly the dense-matrix traces, so the sandwich theorem
//! applies.  Overlap data truncated to a subspace only satisfies the row
//! constraint; results built from it are flagged unvalidated instead of
//! being passed through the ordering check.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::spectral::{eigendecompose, shifted_weights, CMatrix};
use crate::thermal::{entropy_of_probabilities, BoundsResult};
use crate::{HermitianOperator, MIN_TEMPERATURE};

/// Largest level count accepted; `dim^2` overlap entries must stay cheap.
pub const DIMENSION_CAP: usize = 4096;
/// Row/column sum tolerance for stochasticity checks.
pub const STOCHASTIC_TOL: f64 = 1e-8;
/// Slop allowed on individual overlap entries outside `[0, 1]`.
pub const ENTRY_SLOP: f64 = 1e-12;

fn check_temperature(t: f64) -> Result<()> {
    if !t.is_finite() || t < MIN_TEMPERATURE {
        return Err(Error::Domain(format!(
            "temperature must be finite and >= {MIN_TEMPERATURE:.0e}, got {t:.6e}"
        )));
    }
    Ok(())
}

/// A set of energy levels, optionally paired with the unitary eigenbasis
/// they belong to (columns in level order).
#[derive(Debug, Clone)]
pub struct SpectralSystem {
    levels: Vec<f64>,
    basis: Option<CMatrix>,
}

impl SpectralSystem {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidInput("level list must be non-empty".into()));
        }
        if levels.len() > DIMENSION_CAP {
            return Err(Error::InvalidInput(format!(
                "level count {} exceeds the cap {DIMENSION_CAP}",
                levels.len()
            )));
        }
        if levels.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidInput("levels must be finite".into()));
        }
        Ok(Self { levels, basis: None })
    }

    pub fn with_basis(levels: Vec<f64>, basis: CMatrix) -> Result<Self> {
        let sys = Self::new(levels)?;
        let n = sys.dim();
        if basis.nrows() != n || basis.ncols() != n {
            return Err(Error::DimensionMismatch { left: basis.nrows(), right: n });
        }
        let gram = basis.adjoint() * &basis;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)].re - expect).abs().max(gram[(i, j)].im.abs()));
            }
        }
        if worst > STOCHASTIC_TOL {
            return Err(Error::InvalidInput(format!(
                "basis is not unitary: max Gram deviation {worst:.3e}"
            )));
        }
        Ok(Self { levels: sys.levels, basis: Some(basis) })
    }

    /// Eigendecompose a Hamiltonian into levels plus eigenbasis.
    pub fn from_operator(h: &HermitianOperator) -> Result<Self> {
        if h.dim() > DIMENSION_CAP {
            return Err(Error::InvalidInput(format!(
                "dimension {} exceeds the cap {DIMENSION_CAP}",
                h.dim()
            )));
        }
        let sd = eigendecompose(h)?;
        Ok(Self {
            levels: sd.eigenvalues().as_slice().to_vec(),
            basis: Some(sd.eigenvectors().clone()),
        })
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn basis(&self) -> Option<&CMatrix> {
        self.basis.as_ref()
    }

    /// `ln sum_j exp(-levels_j / t)`, evaluated in shifted form.
    pub fn ln_partition(&self, t: f64) -> Result<f64> {
        check_temperature(t)?;
        let beta = 1.0 / t;
        let (weights, shift) = shifted_weights(&self.levels, beta);
        let trace: f64 = weights.iter().sum();
        Ok(trace.ln() - beta * shift)
    }
}

/// Thermal populations of the levels.
#[derive(Debug, Clone)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidInput("probability vector must be non-empty".into()));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < -1e-12) {
            return Err(Error::InvalidInput("probabilities must be finite and >= 0".into()));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "probabilities sum to {sum:.15e}, not 1"
            )));
        }
        let probs = probs.into_iter().map(|p| p.max(0.0)).collect();
        Ok(Self { probs })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn entropy(&self) -> f64 {
        entropy_of_probabilities(&self.probs)
    }

    pub fn mean(&self, levels: &[f64]) -> Result<f64> {
        if levels.len() != self.probs.len() {
            return Err(Error::DimensionMismatch { left: levels.len(), right: self.probs.len() });
        }
        Ok(self.probs.iter().zip(levels).map(|(p, l)| p * l).sum())
    }
}

/// Boltzmann populations `exp(-levels/t) / Z` with the usual shift guard.
pub fn boltzmann_probs(system: &SpectralSystem, t: f64) -> Result<ProbabilityVector> {
    check_temperature(t)?;
    let beta = 1.0 / t;
    let (weights, _) = shifted_weights(system.levels(), beta);
    let trace: f64 = weights.iter().sum();
    if !trace.is_finite() || trace <= 0.0 {
        return Err(Error::Degeneracy(format!("population trace evaluated to {trace:.3e}")));
    }
    ProbabilityVector::new(weights.iter().map(|w| w / trace).collect())
}

/// Squared-overlap matrix between two eigenbases.
///
/// `complete` data is doubly stochastic; `truncated` data only satisfies
/// the row constraint (each row sums to at most 1).
#[derive(Debug, Clone)]
pub struct OverlapMatrix {
    k: DMatrix<f64>,
    truncated: bool,
}

fn check_entries(k: &DMatrix<f64>) -> Result<()> {
    if k.nrows() == 0 || k.ncols() == 0 {
        return Err(Error::InvalidInput("overlap matrix must be non-empty".into()));
    }
    for v in k.iter() {
        if !v.is_finite() || *v < -ENTRY_SLOP || *v > 1.0 + ENTRY_SLOP {
            return Err(Error::InvalidInput(format!(
                "overlap entries must lie in [0, 1], found {v:.6e}"
            )));
        }
    }
    Ok(())
}

fn row_sums_ok(k: &DMatrix<f64>, require_exact: bool) -> bool {
    (0..k.nrows()).all(|i| {
        let s: f64 = (0..k.ncols()).map(|j| k[(i, j)]).sum();
        if require_exact { (s - 1.0).abs() <= STOCHASTIC_TOL } else { s <= 1.0 + STOCHASTIC_TOL }
    })
}

fn col_sums_ok(k: &DMatrix<f64>) -> bool {
    (0..k.ncols()).all(|j| {
        let s: f64 = (0..k.nrows()).map(|i| k[(i, j)]).sum();
        (s - 1.0).abs() <= STOCHASTIC_TOL
    })
}

impl OverlapMatrix {
    /// Overlap data for complete bases; must be square and doubly stochastic.
    pub fn complete(k: DMatrix<f64>) -> Result<Self> {
        check_entries(&k)?;
        if k.nrows() != k.ncols() {
            return Err(Error::DimensionMismatch { left: k.nrows(), right: k.ncols() });
        }
        if !row_sums_ok(&k, true) || !col_sums_ok(&k) {
            return Err(Error::InvalidInput(
                "complete overlap matrix must be doubly stochastic within 1e-8".into(),
            ));
        }
        Ok(Self { k, truncated: false })
    }

    /// Overlap data restricted to a subspace; rows may sum to less than 1.
    pub fn truncated(k: DMatrix<f64>) -> Result<Self> {
        check_entries(&k)?;
        if !row_sums_ok(&k, false) {
            return Err(Error::InvalidInput(
                "overlap rows must sum to at most 1".into(),
            ));
        }
        Ok(Self { k, truncated: true })
    }

    /// Accept either kind, classifying by the column sums.
    pub fn detect(k: DMatrix<f64>) -> Result<Self> {
        if k.nrows() == k.ncols() && row_sums_ok(&k, true) && col_sums_ok(&k) {
            Self::complete(k)
        } else {
            Self::truncated(k)
        }
    }

    /// `k[j][l] = |<j_1 | l_2>|^2` from two unitary bases.
    pub fn from_bases(sys1: &SpectralSystem, sys2: &SpectralSystem) -> Result<Self> {
        let u = sys1
            .basis()
            .ok_or_else(|| Error::InvalidInput("first system has no basis".into()))?;
        let v = sys2
            .basis()
            .ok_or_else(|| Error::InvalidInput("second system has no basis".into()))?;
        if sys1.dim() != sys2.dim() {
            return Err(Error::DimensionMismatch { left: sys1.dim(), right: sys2.dim() });
        }
        let overlap = u.adjoint() * v;
        let k = DMatrix::from_fn(sys1.dim(), sys2.dim(), |j, l| overlap[(j, l)].norm_sqr());
        Self::complete(k)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.k
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn nrows(&self) -> usize {
        self.k.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.k.ncols()
    }
}

/// The two overlap-weighted cross means.
#[derive(Debug, Clone, Copy)]
pub struct FcCrossMeans {
    /// `Tr(rho_1 H_2) = sum_jl p1_j eps2_l k[j][l]`.
    pub rho1_h2: f64,
    /// `Tr(rho_2 H_1) = sum_jl p2_j eps1_l k[l][j]`.
    pub rho2_h1: f64,
}

pub fn cross_means_fc(
    p1: &ProbabilityVector,
    p2: &ProbabilityVector,
    levels1: &[f64],
    levels2: &[f64],
    k: &OverlapMatrix,
) -> Result<FcCrossMeans> {
    if p1.len() != k.nrows() || levels1.len() != k.nrows() {
        return Err(Error::DimensionMismatch { left: p1.len(), right: k.nrows() });
    }
    if p2.len() != k.ncols() || levels2.len() != k.ncols() {
        return Err(Error::DimensionMismatch { left: p2.len(), right: k.ncols() });
    }
    let m = k.matrix();
    let mut rho1_h2 = 0.0;
    let mut rho2_h1 = 0.0;
    for j in 0..k.nrows() {
        for l in 0..k.ncols() {
            rho1_h2 += p1.as_slice()[j] * levels2[l] * m[(j, l)];
            rho2_h1 += p2.as_slice()[l] * levels1[j] * m[(j, l)];
        }
    }
    Ok(FcCrossMeans { rho1_h2, rho2_h1 })
}

/// Entropy-difference bounds from level populations and overlap factors.
///
/// With complete overlap data this reproduces the dense-matrix bounds
/// exactly; the result is then ordering-checked.  Truncated data yields an
/// unvalidated result.
pub fn delta_s_bounds_fc(
    sys1: &SpectralSystem,
    sys2: &SpectralSystem,
    t1: f64,
    t2: f64,
    k: &OverlapMatrix,
) -> Result<BoundsResult> {
    let p1 = boltzmann_probs(sys1, t1)?;
    let p2 = boltzmann_probs(sys2, t2)?;
    let cm = cross_means_fc(&p1, &p2, sys1.levels(), sys2.levels(), k)?;
    let e1 = p1.mean(sys1.levels())?;
    let e2 = p2.mean(sys2.levels())?;
    let lower = (e2 - cm.rho1_h2) / t2;
    let upper = (cm.rho2_h1 - e1) / t1;
    let exact = p2.entropy() - p1.entropy();
    if k.is_truncated() {
        Ok(BoundsResult::unchecked(lower, Some(exact), upper))
    } else {
        BoundsResult::checked(lower, exact, upper)
    }
}

/// Bounds on `F_1/T_1 - F_2/T_2 = ln(Z_2/Z_1)` from populations and overlap
/// factors.
pub fn helmholtz_bounds_fc(
    sys1: &SpectralSystem,
    sys2: &SpectralSystem,
    t1: f64,
    t2: f64,
    k: &OverlapMatrix,
) -> Result<BoundsResult> {
    let p1 = boltzmann_probs(sys1, t1)?;
    let p2 = boltzmann_probs(sys2, t2)?;
    let cm = cross_means_fc(&p1, &p2, sys1.levels(), sys2.levels(), k)?;
    let e1 = p1.mean(sys1.levels())?;
    let e2 = p2.mean(sys2.levels())?;
    let lower = e1 / t1 - cm.rho1_h2 / t2;
    let upper = cm.rho2_h1 / t1 - e2 / t2;
    let exact = sys2.ln_partition(t2)? - sys1.ln_partition(t1)?;
    if k.is_truncated() {
        Ok(BoundsResult::unchecked(lower, Some(exact), upper))
    } else {
        BoundsResult::checked(lower, exact, upper)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn rotation_basis(phi: f64) -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(phi.cos(), 0.0),
                Complex64::new(-phi.sin(), 0.0),
                Complex64::new(phi.sin(), 0.0),
                Complex64::new(phi.cos(), 0.0),
            ],
        )
    }

    #[test]
    fn rotated_bases_give_cos_sin_squares() {
        let sys1 = SpectralSystem::with_basis(vec![0.0, 1.0], CMatrix::identity(2, 2)).unwrap();
        let sys2 = SpectralSystem::with_basis(vec![0.0, 2.0], rotation_basis(0.3)).unwrap();
        let k = OverlapMatrix::from_bases(&sys1, &sys2).unwrap();
        let c2 = 0.3f64.cos().powi(2);
        let s2 = 0.3f64.sin().powi(2);
        assert!((k.matrix()[(0, 0)] - c2).abs() < 1e-14);
        assert!((k.matrix()[(0, 1)] - s2).abs() < 1e-14);
        assert!((k.matrix()[(1, 0)] - s2).abs() < 1e-14);
        assert!((k.matrix()[(1, 1)] - c2).abs() < 1e-14);
        assert!(!k.is_truncated());
    }

    #[test]
    fn identity_overlap_reduces_to_population_sums() {
        let levels = vec![0.0, 0.8, 2.1];
        let sys1 = SpectralSystem::new(levels.clone()).unwrap();
        let sys2 = SpectralSystem::new(levels.clone()).unwrap();
        let k = OverlapMatrix::complete(DMatrix::identity(3, 3)).unwrap();
        let (t1, t2) = (1.0, 3.0);
        let b = delta_s_bounds_fc(&sys1, &sys2, t1, t2, &k).unwrap();

        let p1 = boltzmann_probs(&sys1, t1).unwrap();
        let p2 = boltzmann_probs(&sys2, t2).unwrap();
        let lower: f64 = levels
            .iter()
            .enumerate()
            .map(|(j, l)| (p2.as_slice()[j] - p1.as_slice()[j]) * l)
            .sum::<f64>()
            / t2;
        let upper: f64 = levels
            .iter()
            .enumerate()
            .map(|(j, l)| (p2.as_slice()[j] - p1.as_slice()[j]) * l)
            .sum::<f64>()
            / t1;
        assert!((b.lower - lower).abs() < 1e-12);
        assert!((b.upper - upper).abs() < 1e-12);
    }

    #[test]
    fn complete_rejects_non_stochastic() {
        let k = DMatrix::from_row_slice(2, 2, &[0.9, 0.0, 0.0, 0.9]);
        assert!(OverlapMatrix::complete(k.clone()).is_err());
        let detected = OverlapMatrix::detect(k).unwrap();
        assert!(detected.is_truncated());
    }

    #[test]
    fn truncated_rejects_row_overflow() {
        let k = DMatrix::from_row_slice(2, 2, &[0.9, 0.3, 0.0, 0.9]);
        assert!(OverlapMatrix::truncated(k).is_err());
    }

    #[test]
    fn dimension_cap_enforced() {
        assert!(SpectralSystem::new(vec![0.0; DIMENSION_CAP + 1]).is_err());
    }
}
