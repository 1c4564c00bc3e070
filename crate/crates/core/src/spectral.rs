//! Dense Hermitian operators, their spectral decompositions, and Boltzmann
//! weights.
//!
//! Operators are validated on construction (square, finite, Hermitian within
//! a scaled tolerance) and stored in exactly Hermitian form, so every
//! downstream consumer can rely on real eigenvalues and a unitary eigenbasis.
//! The eigensolver is nalgebra's tridiagonalization-based `SymmetricEigen`;
//! this module adds ascending eigenvalue order, a deterministic orthonormal
//! basis inside degenerate clusters, and a reconstruction check.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::EXPONENT_BUDGET;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Hermiticity tolerance, scaled by `1 + max entry magnitude`.
pub const HERMITICITY_TOL: f64 = 1e-9;
/// Reconstruction tolerance for `U diag(lambda) U^dag` against the input,
/// scaled by the max entry magnitude.
pub const RECONSTRUCTION_TOL: f64 = 1e-10;
/// Acceptable deviation from unit trace for density-matrix arguments.
pub const TRACE_TOL: f64 = 1e-8;
/// Acceptable imaginary residue when a trace is known to be real.
pub const IMAG_RESIDUE_TOL: f64 = 1e-8;
/// Hermiticity tolerance for density-matrix arguments (looser than for
/// operators: these are usually the output of earlier arithmetic).
pub const DENSITY_HERMITICITY_TOL: f64 = 1e-8;

fn max_entry_norm(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

fn max_asymmetry(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check_square_finite(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch { left: m.nrows(), right: m.ncols() });
    }
    if m.nrows() == 0 {
        return Err(Error::InvalidInput("matrix must have dimension >= 1".into()));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidInput("matrix entries must be finite".into()));
    }
    Ok(())
}

/// Wire format for Hermitian operators: row-major real and imaginary parts.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

/// A finite-dimensional Hermitian operator.
///
/// The stored matrix is exactly Hermitian: after the asymmetry check the
/// constructor replaces the input by `(H + H^dag)/2`, which is idempotent on
/// already-Hermitian input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct HermitianOperator {
    mat: CMatrix,
}

impl HermitianOperator {
    pub fn new(mat: CMatrix) -> Result<Self> {
        check_square_finite(&mat)?;
        let tolerance = HERMITICITY_TOL * (1.0 + max_entry_norm(&mat));
        let asym = max_asymmetry(&mat);
        if asym > tolerance {
            return Err(Error::NotHermitian { max_asymmetry: asym, tolerance });
        }
        let sym = (&mat + mat.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(Self { mat: sym })
    }

    /// Construct from row-major real and imaginary parts.
    pub fn from_re_im(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let n = re.len();
        if im.len() != n {
            return Err(Error::DimensionMismatch { left: n, right: im.len() });
        }
        if re.iter().any(|row| row.len() != n) || im.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput("matrix rows must all have length dim".into()));
        }
        let mat = CMatrix::from_fn(n.max(1), n.max(1), |i, j| {
            if n == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(re[i][j], im[i][j])
            }
        });
        if n == 0 {
            return Err(Error::InvalidInput("matrix must have dimension >= 1".into()));
        }
        Self::new(mat)
    }

    /// Construct a real symmetric operator from its row-major entries.
    pub fn from_real(re: &[Vec<f64>]) -> Result<Self> {
        let im = vec![vec![0.0; re.len()]; re.len()];
        Self::from_re_im(re, &im)
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidInput("diagonal must be non-empty".into()));
        }
        if diag.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("diagonal entries must be finite".into()));
        }
        let n = diag.len();
        let mat = CMatrix::from_fn(n, n, |i, j| {
            if i == j { Complex64::new(diag[i], 0.0) } else { Complex64::new(0.0, 0.0) }
        });
        Ok(Self { mat })
    }

    /// Internal constructor for matrices already known to be exactly Hermitian.
    pub(crate) fn from_matrix_unchecked(mat: CMatrix) -> Self {
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn max_norm(&self) -> f64 {
        max_entry_norm(&self.mat)
    }

    /// `a*X + b*Y` for real `a`, `b`; Hermitian by construction.
    pub fn linear_combination(a: f64, x: &Self, b: f64, y: &Self) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(Error::DimensionMismatch { left: x.dim(), right: y.dim() });
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInput("combination coefficients must be finite".into()));
        }
        let ca = Complex64::new(a, 0.0);
        let cb = Complex64::new(b, 0.0);
        Ok(Self { mat: &x.mat * ca + &y.mat * cb })
    }

    /// `X - Y`.
    pub fn difference(x: &Self, y: &Self) -> Result<Self> {
        Self::linear_combination(1.0, x, -1.0, y)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !factor.is_finite() {
            return Err(Error::InvalidInput("scale factor must be finite".into()));
        }
        Ok(Self { mat: &self.mat * Complex64::new(factor, 0.0) })
    }

    /// Row-major `(re, im)` parts, the same layout as the wire format.
    pub fn to_parts(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        matrix_to_parts(&self.mat)
    }
}

pub fn matrix_to_parts(m: &CMatrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let re = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect())
        .collect();
    let im = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect())
        .collect();
    (re, im)
}

impl TryFrom<MatrixJson> for HermitianOperator {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.re.len() != j.dim || j.im.len() != j.dim {
            return Err(Error::InvalidInput(format!(
                "declared dim {} does not match row count (re: {}, im: {})",
                j.dim,
                j.re.len(),
                j.im.len()
            )));
        }
        Self::from_re_im(&j.re, &j.im)
    }
}

impl From<HermitianOperator> for MatrixJson {
    fn from(op: HermitianOperator) -> Self {
        let dim = op.dim();
        let (re, im) = op.to_parts();
        MatrixJson { dim, re, im }
    }
}

/// Eigenvalues in ascending order with a matching unitary column basis.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: DVector<f64>,
    eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    /// `U diag(lambda) U^dag`; used by consistency checks and tests.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.dim();
        let lam = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(self.eigenvalues[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        &self.eigenvectors * lam * self.eigenvectors.adjoint()
    }
}

/// Spectral decomposition with ascending eigenvalues.
///
/// Inside clusters of eigenvalues closer than `1e-12 * (1 + max |lambda|)`
/// the raw solver columns are re-orthonormalized by modified Gram-Schmidt in
/// ascending-index order, so degenerate subspaces get a deterministic basis.
pub fn eigendecompose(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    let dim = h.dim();
    let se = SymmetricEigen::try_new(h.matrix().clone(), f64::EPSILON, 100_000)
        .ok_or(Error::EigenFailed { dim })?;
    if se.eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(Error::EigenFailed { dim });
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        se.eigenvalues[a]
            .partial_cmp(&se.eigenvalues[b])
            .expect("finite eigenvalues")
            .then(a.cmp(&b))
    });
    let eigenvalues = DVector::from_iterator(dim, order.iter().map(|&k| se.eigenvalues[k]));
    let mut eigenvectors = CMatrix::zeros(dim, dim);
    for (new_col, &old_col) in order.iter().enumerate() {
        eigenvectors.set_column(new_col, &se.eigenvectors.column(old_col));
    }

    let scale = 1.0 + eigenvalues.iter().fold(0.0f64, |acc, l| acc.max(l.abs()));
    let cluster_tol = 1e-12 * scale;
    let mut start = 0;
    while start < dim {
        let mut end = start + 1;
        while end < dim && eigenvalues[end] - eigenvalues[end - 1] <= cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            orthonormalize_columns(&mut eigenvectors, start, end)?;
        }
        start = end;
    }

    let sd = SpectralDecomposition { eigenvalues, eigenvectors };
    let rec = sd.reconstruct();
    let err = max_entry_norm(&(&rec - h.matrix()));
    let tol = RECONSTRUCTION_TOL * h.max_norm().max(f64::MIN_POSITIVE);
    if err > tol {
        return Err(Error::Inconsistency {
            what: "eigendecomposition does not reconstruct the input".into(),
            magnitude: err,
            tolerance: tol,
        });
    }
    Ok(sd)
}

fn orthonormalize_columns(u: &mut CMatrix, start: usize, end: usize) -> Result<()> {
    let n = u.nrows();
    for k in start..end {
        let mut v: CVector = u.column(k).into();
        for m in start..k {
            let um = u.column(m);
            let overlap: Complex64 = um.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            for i in 0..n {
                let corr = overlap * um[i];
                v[i] -= corr;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return Err(Error::Degeneracy(
                "eigenvector cluster collapsed during re-orthonormalization".into(),
            ));
        }
        let inv = Complex64::new(1.0 / norm, 0.0);
        for i in 0..n {
            v[i] *= inv;
        }
        u.set_column(k, &v);
    }
    Ok(())
}

/// Unnormalized Boltzmann operator `exp(-beta (H - shift I))` with its trace.
///
/// `shift` is zero whenever all exponents fit the budget; otherwise it equals
/// the smallest eigenvalue, so the largest stored weight is exactly 1 and the
/// true trace is `trace * exp(-beta * shift)`.
#[derive(Debug, Clone)]
pub struct BoltzmannWeight {
    pub matrix: CMatrix,
    pub trace: f64,
    pub shift: f64,
}

impl BoltzmannWeight {
    /// `ln Tr exp(-beta H)` including the shift contribution.
    pub fn log_trace(&self, beta: f64) -> f64 {
        self.trace.ln() - beta * self.shift
    }
}

/// `exp(-beta H)` through the spectral decomposition, with automatic
/// ground-state shift when the exponents would leave the representable range.
pub fn boltzmann_weight(h: &HermitianOperator, beta: f64) -> Result<BoltzmannWeight> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::Domain(format!("inverse temperature must be positive, got {beta}")));
    }
    let sd = eigendecompose(h)?;
    let (weights, shift) = shifted_weights(sd.eigenvalues().as_slice(), beta);
    let n = h.dim();
    let diag = CMatrix::from_fn(n, n, |i, j| {
        if i == j { Complex64::new(weights[i], 0.0) } else { Complex64::new(0.0, 0.0) }
    });
    let raw = sd.eigenvectors() * diag * sd.eigenvectors().adjoint();
    let matrix = (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0);
    let trace = weights.iter().sum();
    Ok(BoltzmannWeight { matrix, trace, shift })
}

/// Boltzmann weights for a set of levels, with the same shift policy as
/// [`boltzmann_weight`].  Weights smaller than `exp(-budget)` relative to the
/// largest are flushed to zero.
pub(crate) fn shifted_weights(levels: &[f64], beta: f64) -> (Vec<f64>, f64) {
    let lmin = levels.iter().copied().fold(f64::INFINITY, f64::min);
    let lmax = levels.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let needs_shift = beta * lmax.abs() > EXPONENT_BUDGET
        || beta * lmin.abs() > EXPONENT_BUDGET
        || beta * (lmax - lmin) > EXPONENT_BUDGET;
    let shift = if needs_shift { lmin } else { 0.0 };
    let flush = (-EXPONENT_BUDGET).exp() * (-beta * (lmin - shift)).exp();
    let weights = levels
        .iter()
        .map(|&l| {
            let w = (-beta * (l - shift)).exp();
            if w < flush { 0.0 } else { w }
        })
        .collect();
    (weights, shift)
}

/// `Tr(rho A)` for a density matrix `rho` and Hermitian `A`.
///
/// `rho` must be Hermitian within `1e-8` and have unit trace within `1e-8`;
/// the imaginary residue of the trace is checked and discarded.
pub fn mean_value(rho: &CMatrix, op: &HermitianOperator) -> Result<f64> {
    check_square_finite(rho)?;
    if rho.nrows() != op.dim() {
        return Err(Error::DimensionMismatch { left: rho.nrows(), right: op.dim() });
    }
    let tolerance = DENSITY_HERMITICITY_TOL * (1.0 + max_entry_norm(rho));
    let asym = max_asymmetry(rho);
    if asym > tolerance {
        return Err(Error::NotHermitian { max_asymmetry: asym, tolerance });
    }
    let tr: Complex64 = (0..rho.nrows()).map(|i| rho[(i, i)]).sum();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::InvalidInput(format!(
            "density matrix trace {:.12e} + {:.3e}i is not 1 within {:.1e}",
            tr.re, tr.im, TRACE_TOL
        )));
    }

    let n = rho.nrows();
    let mut val = Complex64::new(0.0, 0.0);
    let a = op.matrix();
    for i in 0..n {
        for j in 0..n {
            val += rho[(i, j)] * a[(j, i)];
        }
    }
    let residue_tol = IMAG_RESIDUE_TOL * (1.0 + op.max_norm());
    if val.im.abs() > residue_tol {
        return Err(Error::Inconsistency {
            what: "trace of rho * A has a non-real residue".into(),
            magnitude: val.im.abs(),
            tolerance: residue_tol,
        });
    }
    Ok(val.re)
}
