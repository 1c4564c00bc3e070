//! Independent oracles for the spectral core: closed-form spectra, a plain
//! scaled-and-squared Taylor exponential, and the eigenbasis route for
//! traces.  Nothing here reuses the code paths it is checking.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::SeedableRng;
use thermobound::sampling::{random_density_matrix, random_hermitian};
use thermobound::spectral::{boltzmann_weight, eigendecompose, mean_value};
use thermobound::HermitianOperator;

type CMat = DMatrix<Complex64>;

/// exp(M) by scaling-and-squaring a bare Taylor series.  Slow and obvious
/// on purpose; accurate to ~1e-14 for the norms used here.
fn taylor_exp(m: &CMat) -> CMat {
    let n = m.nrows();
    let norm = m.iter().map(|z| z.norm()).fold(0.0f64, f64::max) * n as f64;
    let s = norm.log2().ceil().max(0.0) as u32 + 1;
    let scaled = m / Complex64::new(2f64.powi(s as i32), 0.0);
    let mut term = CMat::identity(n, n);
    let mut sum = CMat::identity(n, n);
    for k in 1..200 {
        term = (&term * &scaled) / Complex64::new(k as f64, 0.0);
        sum += &term;
        if term.iter().map(|z| z.norm()).fold(0.0f64, f64::max) < 1e-20 {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

fn max_entry_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0f64, f64::max)
}

#[test]
fn tridiagonal_toeplitz_spectrum_is_cosine() {
    // Eigenvalues of the (a, b, a) tridiagonal Toeplitz matrix are
    // a + 2b cos(k pi / (n+1)), a classical closed form.
    let (n, a, b) = (8usize, 1.5f64, 0.7f64);
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        rows[i][i] = a;
        if i + 1 < n {
            rows[i][i + 1] = b;
            rows[i + 1][i] = b;
        }
    }
    let h = HermitianOperator::from_real(&rows).unwrap();
    let dec = eigendecompose(&h).unwrap();
    let mut expect: Vec<f64> = (1..=n)
        .map(|k| a + 2.0 * b * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
        .collect();
    expect.sort_by(f64::total_cmp);
    for (got, want) in dec.eigenvalues().iter().zip(&expect) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
}

#[test]
fn two_by_two_spectrum_matches_quadratic_formula() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let h = random_hermitian(2, &mut rng);
        let m = h.matrix();
        let (a, c) = (m[(0, 0)].re, m[(1, 1)].re);
        let r = ((a - c) * 0.5).hypot(m[(0, 1)].norm());
        let mid = 0.5 * (a + c);
        let dec = eigendecompose(&h).unwrap();
        assert!((dec.eigenvalues()[0] - (mid - r)).abs() < 1e-12);
        assert!((dec.eigenvalues()[1] - (mid + r)).abs() < 1e-12);
    }
}

#[test]
fn eigendecomposition_certificates() {
    // Residuals, orthonormality, trace and Frobenius moments: together these
    // certify the decomposition without re-deriving it.
    let mut rng = StdRng::seed_from_u64(12);
    for dim in 2..=8 {
        for _ in 0..20 {
            let h = random_hermitian(dim, &mut rng);
            let m = h.matrix();
            let dec = eigendecompose(&h).unwrap();
            let scale = 1.0 + h.max_norm();
            for j in 0..dim {
                let v = dec.eigenvectors().column(j);
                let residual = (m * v - v * Complex64::from(dec.eigenvalues()[j])).norm();
                assert!(residual < 1e-9 * scale, "residual {residual:.3e}");
            }
            let gram = dec.eigenvectors().adjoint() * dec.eigenvectors();
            assert!(max_entry_diff(&gram, &CMat::identity(dim, dim)) < 1e-10);

            let trace: f64 = (0..dim).map(|i| m[(i, i)].re).sum();
            let lam_sum: f64 = dec.eigenvalues().iter().sum();
            assert!((trace - lam_sum).abs() < 1e-10 * scale);

            let frob: f64 = m.iter().map(|z| z.norm_sqr()).sum();
            let lam_sq: f64 = dec.eigenvalues().iter().map(|l| l * l).sum();
            assert!((frob - lam_sq).abs() < 1e-9 * scale * scale);

            for j in 1..dim {
                assert!(dec.eigenvalues()[j] >= dec.eigenvalues()[j - 1]);
            }
        }
    }
}

#[test]
fn determinant_is_eigenvalue_product() {
    let mut rng = StdRng::seed_from_u64(13);
    for dim in 2..=6 {
        for _ in 0..10 {
            let h = random_hermitian(dim, &mut rng);
            let det = h.matrix().clone().lu().determinant();
            let product: f64 = eigendecompose(&h).unwrap().eigenvalues().iter().product();
            assert!(det.im.abs() < 1e-9 * (1.0 + det.norm()));
            assert!(
                (det.re - product).abs() < 1e-8 * (1.0 + det.norm()),
                "{} vs {product}",
                det.re
            );
        }
    }
}

#[test]
fn boltzmann_weight_matches_taylor_exponential() {
    let mut rng = StdRng::seed_from_u64(14);
    for dim in 2..=5 {
        for beta in [0.3, 1.0, 2.5] {
            let h = random_hermitian(dim, &mut rng);
            let w = boltzmann_weight(&h, beta).unwrap();
            let direct = taylor_exp(&(h.matrix() * Complex64::from(-beta)));
            // The stored matrix may carry a spectral shift; undo it.
            let unshifted = &w.matrix * Complex64::from((-beta * w.shift).exp());
            let scale = direct.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
            assert!(max_entry_diff(&unshifted, &direct) < 1e-12 * (1.0 + scale));

            let tr: Complex64 = (0..dim).map(|i| direct[(i, i)]).sum();
            assert!((w.log_trace(beta) - tr.re.ln()).abs() < 1e-12);
        }
    }
}

#[test]
fn deep_cold_partition_function_stays_finite() {
    // beta * spread = 4000: the naive exponential under/overflows, the
    // shifted route must not.
    let levels = vec![-2.0, -1.0, 0.5, 2.0];
    let h = HermitianOperator::from_diagonal(&levels).unwrap();
    let beta = 1000.0;
    let w = boltzmann_weight(&h, beta).unwrap();
    // ln Z = -beta*min + ln sum exp(-beta(l - min)), summed by hand.
    let expect: f64 = 2.0 * beta
        + levels.iter().map(|l| (-beta * (l + 2.0)).exp()).sum::<f64>().ln();
    assert!(w.trace.is_finite() && w.trace > 0.0);
    assert!((w.log_trace(beta) - expect).abs() < 1e-9);
}

#[test]
fn mean_value_matches_eigenbasis_route() {
    let mut rng = StdRng::seed_from_u64(15);
    for dim in 2..=8 {
        for _ in 0..10 {
            let rho = random_density_matrix(dim, &mut rng);
            let h = random_hermitian(dim, &mut rng);
            let got = mean_value(&rho, &h).unwrap();
            // Independent route: sum_j lambda_j <v_j| rho |v_j>.
            let dec = eigendecompose(&h).unwrap();
            let mut expect = 0.0;
            for j in 0..dim {
                let v = dec.eigenvectors().column(j);
                expect += dec.eigenvalues()[j] * (v.adjoint() * &rho * v)[(0, 0)].re;
            }
            assert!((got - expect).abs() < 1e-10 * (1.0 + h.max_norm()));
        }
    }
}
