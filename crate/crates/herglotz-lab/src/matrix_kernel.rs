//! Dense complex-matrix primitives: Hermitian splits, PSD tests, numerical
//! rank, and the principal matrix logarithm.
//!
//! Everything here is small-n (≤ 16) dense linear algebra; operations are
//! pure and allocation-happy rather than clever.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::tolerances::{EIGVEC_COND_LIMIT, LOG_CUT_TOL, TOL_HERM};

/// Square complex matrix (the working currency of the crate).
pub type CMatrix = DMatrix<Complex64>;

/// Errors from the matrix primitives.
#[derive(Debug, Clone, Error)]
pub enum MatrixKernelError {
    /// The input was expected Hermitian but deviates beyond tolerance.
    #[error("matrix is not Hermitian: ‖H − H*‖ = {deviation:.3e} exceeds {limit:.3e}")]
    NotHermitian { deviation: f64, limit: f64 },
    /// An eigenvalue lies within tolerance of the branch cut (−∞, 0].
    #[error("eigenvalue {eigenvalue} lies within {distance:.3e} of the branch cut (−∞, 0]")]
    SpectrumOnCut { eigenvalue: Complex64, distance: f64 },
    /// The eigenvector matrix is too ill-conditioned to trust (matrix
    /// effectively defective).
    #[error("eigenvector matrix condition number {cond:.3e} exceeds limit {limit:.3e}")]
    IllConditioned { cond: f64, limit: f64 },
    /// The iterative eigens solver failed to converge (pathological input).
    #[error("eigendecomposition failed to converge")]
    EigenFailure,
    /// exp(log M) failed to reproduce M within its contract.
    #[error("logarithm verification failed: relative residual {residual:.3e}")]
    LogVerificationFailed { residual: f64 },
}

/// Hermitian matrix: entries equal their own conjugate transpose.
///
/// Construction symmetrizes the stored entries, so the invariant holds
/// exactly afterwards; [`HermitianMatrix::new`] additionally rejects inputs
/// whose deviation from Hermiticity exceeds the crate tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    /// Validates `‖H − H*‖ ≤ tol_herm · (1 + ‖H‖)` and stores `(H + H*)/2`.
    pub fn new(m: CMatrix) -> Result<Self, MatrixKernelError> {
        let deviation = (&m - m.adjoint()).norm();
        let limit = TOL_HERM * (1.0 + m.norm());
        if deviation > limit {
            return Err(MatrixKernelError::NotHermitian { deviation, limit });
        }
        Ok(Self::symmetrized(&m))
    }

    /// Projects onto the Hermitian part `(M + M*)/2` without validation.
    pub fn symmetrized(m: &CMatrix) -> Self {
        let half = Complex64::new(0.5, 0.0);
        HermitianMatrix((m + m.adjoint()) * half)
    }

    /// Zero matrix of the given dimension.
    pub fn zeros(n: usize) -> Self {
        HermitianMatrix(CMatrix::zeros(n, n))
    }

    /// `s · I_n` for real `s`.
    pub fn scaled_identity(n: usize, s: f64) -> Self {
        HermitianMatrix(CMatrix::identity(n, n) * Complex64::new(s, 0.0))
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    /// Diagonal matrix from real entries.
    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let n = d.len();
        HermitianMatrix(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(d[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// Dimension n.
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// Borrow the underlying matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    /// Consume into the underlying matrix.
    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut eigs: Vec<f64> = nalgebra::SymmetricEigen::new(self.0.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eigs.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        eigs
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        *self
            .eigenvalues()
            .first()
            .expect("nonempty matrix has eigenvalues")
    }

    /// Spectral (2-)norm: largest |eigenvalue|.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .map(|x| x.abs())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Quadratic form `(c, H c)` (real by Hermiticity).
    pub fn quadratic_form(&self, c: &nalgebra::DVector<Complex64>) -> f64 {
        (c.adjoint() * &self.0 * c)[(0, 0)].re
    }

    /// Spectral calculus: `U f(Λ) U*` for the eigendecomposition
    /// `H = U Λ U*`.
    pub fn spectral_map(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let eig = nalgebra::SymmetricEigen::new(self.0.clone());
        let d = CMatrix::from_diagonal(&eig.eigenvalues.map(f));
        &eig.eigenvectors * d * eig.eigenvectors.adjoint()
    }
}

impl std::ops::Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 - &rhs.0)
    }
}

impl std::ops::Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        HermitianMatrix(&self.0 * Complex64::new(rhs, 0.0))
    }
}

/// Splits `M = Re M + i·Im M` into its Hermitian and anti-Hermitian-scaled
/// parts: `Re M = (M + M*)/2`, `Im M = (M − M*)/(2i)`.
pub fn hermitian_split(m: &CMatrix) -> (HermitianMatrix, HermitianMatrix) {
    let half = Complex64::new(0.5, 0.0);
    let minus_half_i = Complex64::new(0.0, -0.5);
    let re = (m + m.adjoint()) * half;
    let im = (m - m.adjoint()) * minus_half_i;
    (
        HermitianMatrix::symmetrized(&re),
        HermitianMatrix::symmetrized(&im),
    )
}

/// True iff the smallest eigenvalue is ≥ `−tol·(1 + ‖H‖)` (spectral norm).
pub fn is_psd(h: &HermitianMatrix, tol: f64) -> bool {
    let eigs = h.eigenvalues();
    let scale = eigs.iter().map(|x| x.abs()).fold(0.0, f64::max);
    match eigs.first() {
        Some(&min) => min >= -tol * (1.0 + scale),
        None => true,
    }
}

/// Number of singular values exceeding `rel_tol · σ_max`; 0 for the zero
/// matrix. For Hermitian input the singular values are |eigenvalues|.
pub fn numerical_rank(h: &HermitianMatrix, rel_tol: f64) -> usize {
    let sigmas: Vec<f64> = h.eigenvalues().iter().map(|x| x.abs()).collect();
    let sigma_max = sigmas.iter().copied().fold(0.0, f64::max);
    sigmas.iter().filter(|&&s| s > rel_tol * sigma_max).count()
}

/// Eigendecomposition of a general complex matrix via the complex Schur
/// form: eigenvalues plus a column-normalized eigenvector matrix obtained
/// by triangular back-substitution.
pub(crate) fn complex_eigen(
    m: &CMatrix,
) -> Result<(Vec<Complex64>, CMatrix), MatrixKernelError> {
    let n = m.nrows();
    let schur = m
        .clone()
        .try_schur(1e-14, 100_000)
        .ok_or(MatrixKernelError::EigenFailure)?;
    let (q, t) = schur.unpack();
    let eigenvalues: Vec<Complex64> = (0..n).map(|k| t[(k, k)]).collect();

    // Eigenvectors of the upper-triangular factor: column k solves
    // (T − λ_k I) x = 0 with x_k = 1 and x_j = 0 for j > k. A vanishing
    // denominator signals a repeated eigenvalue; the guard keeps the vector
    // finite and the later condition check reports the defectiveness.
    let guard = f64::EPSILON * (1.0 + t.norm());
    let mut x = CMatrix::zeros(n, n);
    for k in 0..n {
        x[(k, k)] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for j in (i + 1)..=k {
                s += t[(i, j)] * x[(j, k)];
            }
            let mut den = t[(i, i)] - eigenvalues[k];
            if den.norm() < guard {
                den = Complex64::new(guard, 0.0);
            }
            x[(i, k)] = -s / den;
        }
    }
    let mut v = &q * x;
    for k in 0..n {
        let norm = v.column(k).norm();
        if norm > 0.0 {
            let scale = Complex64::new(1.0 / norm, 0.0);
            for i in 0..n {
                v[(i, k)] *= scale;
            }
        }
    }
    Ok((eigenvalues, v))
}

/// Condition number σ_max/σ_min of a square matrix (∞ when singular).
pub(crate) fn condition_number(m: &CMatrix) -> f64 {
    let svd = m.clone().svd(false, false);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let smin = svd
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if smin <= 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

/// Distance from a point to the branch cut (−∞, 0].
fn cut_distance(z: Complex64) -> f64 {
    if z.re <= 0.0 {
        z.im.abs()
    } else {
        z.norm()
    }
}

/// Principal matrix logarithm by eigendecomposition.
///
/// Returns `L` with `exp(L) = M` (verified to `1e-10·max(1, ‖M‖)`) and
/// every eigenvalue of `L` having imaginary part in (−π, π).
///
/// Errors: [`MatrixKernelError::SpectrumOnCut`] when an eigenvalue lies
/// within tolerance of (−∞, 0]; [`MatrixKernelError::IllConditioned`] when
/// the eigenvector matrix condition number exceeds the crate limit
/// (defective input).
pub fn principal_log(m: &CMatrix) -> Result<CMatrix, MatrixKernelError> {
    let (eigenvalues, v) = complex_eigen(m)?;
    let scale = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let cut_limit = LOG_CUT_TOL * (1.0 + scale);
    for &lambda in &eigenvalues {
        let distance = cut_distance(lambda);
        if distance <= cut_limit {
            return Err(MatrixKernelError::SpectrumOnCut {
                eigenvalue: lambda,
                distance,
            });
        }
    }
    let cond = condition_number(&v);
    if cond > EIGVEC_COND_LIMIT {
        return Err(MatrixKernelError::IllConditioned {
            cond,
            limit: EIGVEC_COND_LIMIT,
        });
    }
    let v_inv = v
        .clone()
        .full_piv_lu()
        .try_inverse()
        .ok_or(MatrixKernelError::IllConditioned {
            cond: f64::INFINITY,
            limit: EIGVEC_COND_LIMIT,
        })?;
    let log_diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        eigenvalues.len(),
        eigenvalues.iter().map(|z| z.ln()),
    ));
    let l = &v * log_diag * v_inv;

    // Contract check along an independent path (Padé scaling-and-squaring
    // exponential rather than the eigenbasis used above).
    let residual = (l.exp() - m).norm() / f64::max(1.0, m.norm());
    if residual > 1e-10 {
        return Err(MatrixKernelError::LogVerificationFailed { residual });
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn split_of_purely_imaginary_identity() {
        let m = CMatrix::identity(2, 2) * c(0.0, 1.0);
        let (re, im) = hermitian_split(&m);
        assert!(re.norm() < 1e-15);
        assert!((im.matrix() - CMatrix::identity(2, 2)).norm() < 1e-15);
    }

    #[test]
    fn split_of_upper_triangular_example() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let (re, im) = hermitian_split(&m);
        let re_expect = CMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.0, 0.5), c(0.0, -0.5), c(1.0, 0.0)],
        );
        let im_expect =
            CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.0, 0.0)]);
        assert!((re.matrix() - re_expect).norm() < 1e-15);
        assert!((im.matrix() - im_expect).norm() < 1e-15);
    }

    #[test]
    fn split_recombines() {
        let m = CMatrix::from_fn(3, 3, |i, j| c(0.3 * i as f64 - 0.7 * j as f64, 0.2 + i as f64 * j as f64));
        let (re, im) = hermitian_split(&m);
        let back = re.matrix() + im.matrix() * c(0.0, 1.0);
        assert!((&back - &m).norm() < 1e-15);
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&HermitianMatrix::identity(3), 1e-10));
        let indefinite = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]);
        assert!(!is_psd(&indefinite, 1e-10));
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)],
        );
        // Eigenvalues 1 and 3.
        let h = HermitianMatrix::new(m).unwrap();
        assert!(is_psd(&h, 1e-10));
        let eigs = h.eigenvalues();
        assert_abs_diff_eq!(eigs[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(&HermitianMatrix::zeros(3), 1e-8), 0);
        let nearly = HermitianMatrix::from_real_diagonal(&[1.0, 1e-16]);
        assert_eq!(numerical_rank(&nearly, 1e-8), 1);
        let full = HermitianMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        assert_eq!(numerical_rank(&full, 1e-8), 3);
    }

    #[test]
    fn rank_invariant_under_unitary_conjugation() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let h = HermitianMatrix::from_real_diagonal(&[2.0, 0.0, -1.0]);
            let a = CMatrix::from_fn(3, 3, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
            let qr = a.qr();
            let q = qr.q();
            let conjugated = HermitianMatrix::symmetrized(&(&q * h.matrix() * q.adjoint()));
            assert_eq!(numerical_rank(&conjugated, 1e-8), 2);
        }
    }

    #[test]
    fn log_of_identity_is_zero() {
        let l = principal_log(&CMatrix::identity(3, 3)).unwrap();
        assert!(l.norm() < 1e-12);
    }

    #[test]
    fn log_of_diagonal_exponentials() {
        let e = std::f64::consts::E;
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c(e, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(e * e, 0.0)],
        );
        let l = principal_log(&m).unwrap();
        assert_abs_diff_eq!(l[(0, 0)].re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(l[(1, 1)].re, 2.0, epsilon = 1e-12);
        assert!(l[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn log_of_i_is_i_pi_over_two() {
        let m = CMatrix::from_row_slice(1, 1, &[c(0.0, 1.0)]);
        let l = principal_log(&m).unwrap();
        assert_abs_diff_eq!(l[(0, 0)].re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(l[(0, 0)].im, std::f64::consts::FRAC_PI_2, epsilon = 1e-14);
    }

    #[test]
    fn log_rejects_spectrum_on_cut() {
        let m = CMatrix::from_row_slice(1, 1, &[c(-2.0, 0.0)]);
        match principal_log(&m) {
            Err(MatrixKernelError::SpectrumOnCut { .. }) => {}
            other => panic!("expected SpectrumOnCut, got {other:?}"),
        }
    }

    #[test]
    fn log_rejects_defective_matrix() {
        // A Jordan block is defective; the eigenvector matrix is singular.
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 1.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 1.0)],
        );
        match principal_log(&m) {
            Err(MatrixKernelError::IllConditioned { .. }) => {}
            other => panic!("expected IllConditioned, got {other:?}"),
        }
    }

    #[test]
    fn exp_log_round_trip_on_random_matrices() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let mut done = 0;
        while done < 100 {
            let n = 1 + (rng.gen::<u64>() % 4) as usize;
            let m = CMatrix::from_fn(n, n, |_, _| {
                c(2.0 * rng.gen::<f64>() - 1.0, 2.0 * rng.gen::<f64>() - 1.0)
            });
            match principal_log(&m) {
                Ok(l) => {
                    let residual = (l.exp() - &m).norm() / f64::max(1.0, m.norm());
                    assert!(residual < 1e-10, "residual {residual}");
                    let (eigs, _) = complex_eigen(&l).unwrap();
                    for e in eigs {
                        assert!(e.im > -std::f64::consts::PI && e.im < std::f64::consts::PI);
                    }
                    done += 1;
                }
                // Random matrices occasionally land near the cut or are
                // ill-conditioned; skip those draws (contract only covers
                // spectra off the cut).
                Err(_) => continue,
            }
        }
    }

    #[test]
    fn hermitian_constructor_rejects_nonhermitian() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        );
        assert!(HermitianMatrix::new(m).is_err());
    }
}
