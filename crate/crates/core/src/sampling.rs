//! Seeded random generation of operators, states, and thermal specs.
//!
//! Everything here is driven by a caller-supplied RNG so sweeps and tests are
//! reproducible from a single seed.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::spectral::CMatrix;
use crate::thermal::{GrandThermalSpec, ThermalSpec};
use crate::HermitianOperator;

fn random_complex_matrix<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Random Hermitian operator with entries of order one.
pub fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> HermitianOperator {
    let a = random_complex_matrix(dim, rng);
    let h = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
    HermitianOperator::new(h).expect("symmetrized matrix is Hermitian")
}

/// Random real symmetric operator.
pub fn random_real_symmetric<R: Rng>(dim: usize, rng: &mut R) -> HermitianOperator {
    let a = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), 0.0)
    });
    let h = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
    HermitianOperator::new(h).expect("symmetrized matrix is Hermitian")
}

/// Random density matrix `A A^dag / Tr(A A^dag)`.
pub fn random_density_matrix<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    let a = random_complex_matrix(dim, rng);
    let m = &a * a.adjoint();
    let tr: f64 = (0..dim).map(|i| m[(i, i)].re).sum();
    let m = m * Complex64::new(1.0 / tr, 0.0);
    (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Random unitary from the QR factorization of a random complex matrix,
/// with column phases fixed so the factorization diagonal is positive.
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    let a = random_complex_matrix(dim, rng);
    let qr = a.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d.conj() / d.norm();
            for i in 0..dim {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Log-uniform sample from `[lo, hi]`.
pub fn log_uniform<R: Rng>(lo: f64, hi: f64, rng: &mut R) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Random canonical spec with a log-uniform temperature.
pub fn random_thermal_spec<R: Rng>(
    dim: usize,
    t_range: (f64, f64),
    rng: &mut R,
) -> Result<ThermalSpec> {
    let h = random_hermitian(dim, rng);
    let t = log_uniform(t_range.0, t_range.1, rng);
    ThermalSpec::new(h, t)
}

/// Random grand-canonical spec; the particle-number operator is an
/// independent random Hermitian of the same dimension.
pub fn random_grand_spec<R: Rng>(
    dim: usize,
    t_range: (f64, f64),
    mu_range: (f64, f64),
    rng: &mut R,
) -> Result<GrandThermalSpec> {
    let h = random_hermitian(dim, rng);
    let n = random_hermitian(dim, rng);
    let t = log_uniform(t_range.0, t_range.1, rng);
    let mu = rng.random_range(mu_range.0..mu_range.1);
    GrandThermalSpec::new(h, n, t, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{rngs::StdRng, SeedableRng};

    #[test]
    fn unitary_is_unitary() {
        let mut rng = StdRng::seed_from_u64(7);
        for dim in [2usize, 3, 5, 8] {
            let u = random_unitary(dim, &mut rng);
            let gram = u.adjoint() * &u;
            for i in 0..dim {
                for j in 0..dim {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (gram[(i, j)] - Complex64::new(expect, 0.0)).norm() < 1e-12,
                        "gram deviation at ({i},{j}) for dim {dim}"
                    );
                }
            }
        }
    }

    #[test]
    fn density_matrix_is_valid() {
        let mut rng = StdRng::seed_from_u64(11);
        let rho = random_density_matrix(6, &mut rng);
        let tr: f64 = (0..6).map(|i| rho[(i, i)].re).sum();
        assert!((tr - 1.0).abs() < 1e-12);
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let a = random_hermitian(4, &mut StdRng::seed_from_u64(42));
        let b = random_hermitian(4, &mut StdRng::seed_from_u64(42));
        assert_eq!(a.matrix(), b.matrix());
    }
}
