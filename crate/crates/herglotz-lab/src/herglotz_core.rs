//! The central function value: matrix-valued functions analytic off the
//! real axis whose imaginary part is positive semidefinite in the upper
//! half plane.
//!
//! A [`HerglotzFunction`] is either a scalar closed form from the catalog,
//! an additive normal form `C + D·z + ∫ dΩ(λ) [(λ−z)⁻¹ − λ(1+λ²)⁻¹]`
//! ([`Representation`]), or a pointwise sum of same-dimension functions.
//! This module evaluates them anywhere off the real axis (lower half plane
//! by reflection), recovers the normal-form data `C = Re M(i)` and
//! `D = lim M(iη)/(iη)`, and verifies the defining positivity structure on
//! a grid.

use num_complex::Complex64;

use crate::catalog::{CatalogEntry, CatalogError, TailCorrection};
use crate::ladders::aitken_matrix_limit;
use crate::matrix_kernel::{hermitian_split, is_psd, numerical_rank, CMatrix, HermitianMatrix};
use crate::measures::{MatrixMeasure, MeasureError};
use crate::tolerances;

/// Errors from constructing or evaluating functions in this module.
#[derive(Debug, thiserror::Error)]
pub enum CoreError {
    /// Evaluation was requested on the real axis, where the function need
    /// not exist pointwise; boundary data goes through the boundary-limit
    /// machinery instead.
    #[error("evaluation point {z} lies on the real axis")]
    OnRealAxis { z: Complex64 },
    /// A real evaluation point carries spectral weight (an atom sits there
    /// or it lies inside an absolutely continuous piece).
    #[error("real point {lambda} lies in the support of the measure")]
    OnSupport { lambda: f64 },
    /// An extrapolation ladder failed its Cauchy test.
    #[error("ladder did not converge: {context}")]
    NoConvergence { context: String },
    /// A computed value had non-finite entries.
    #[error("non-finite value: {context}")]
    NonFinite { context: String },
    /// Mixed dimensions where equal ones were required.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    /// A coefficient that must be positive semidefinite is not.
    #[error("matrix is not positive semidefinite: {context}")]
    NotPSD { context: String },
    /// A verification grid that violates the documented preconditions.
    #[error("invalid verification grid: {context}")]
    BadGrid { context: String },
    /// The first pencil block of a linear-fractional transform is
    /// singular at the requested point.
    #[error("singular pencil: {context}")]
    SingularPencil { context: String },
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// Additive normal form `C + D·z + ∫ dΩ(λ) [(λ−z)⁻¹ − λ(1+λ²)⁻¹]` with
/// Hermitian `C`, positive semidefinite `D`, and a positive matrix
/// measure `Ω`.
///
/// Measures stored in truncated form (infinite atom families cut at a
/// finite radius) carry a scalar tail term that restores the discarded
/// part of the kernel sum analytically, together with a bound on the
/// residual error of that closed form.
#[derive(Debug, Clone)]
pub struct Representation {
    c: HermitianMatrix,
    d: HermitianMatrix,
    omega: MatrixMeasure,
    tail: TailCorrection,
    tail_error: f64,
}

impl Representation {
    /// Normal form without a truncation tail.
    pub fn new(
        c: HermitianMatrix,
        d: HermitianMatrix,
        omega: MatrixMeasure,
    ) -> Result<Self, CoreError> {
        Representation::with_tail(c, d, omega, TailCorrection::None, 0.0)
    }

    /// Normal form whose measure is truncated, with the analytic remainder
    /// `tail` (added as a scalar multiple of the identity) and a bound
    /// `tail_error` on how far that remainder formula can be off.
    pub fn with_tail(
        c: HermitianMatrix,
        d: HermitianMatrix,
        omega: MatrixMeasure,
        tail: TailCorrection,
        tail_error: f64,
    ) -> Result<Self, CoreError> {
        let n = c.dim();
        if d.dim() != n || omega.dim() != n {
            return Err(CoreError::DimensionMismatch {
                context: format!(
                    "constant is {n}×{n} but slope is {0}×{0} and measure is {1}×{1}",
                    d.dim(),
                    omega.dim()
                ),
            });
        }
        if !is_psd(&d, tolerances::PSD_TOL) {
            return Err(CoreError::NotPSD {
                context: format!("linear slope (min eigenvalue {:.3e})", d.min_eigenvalue()),
            });
        }
        if !(tail_error.is_finite() && tail_error >= 0.0) {
            return Err(CoreError::NonFinite {
                context: "tail error bound must be finite and nonnegative".into(),
            });
        }
        omega.validate()?;
        Ok(Representation {
            c,
            d,
            omega,
            tail,
            tail_error,
        })
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    pub fn constant(&self) -> &HermitianMatrix {
        &self.c
    }

    pub fn slope(&self) -> &HermitianMatrix {
        &self.d
    }

    pub fn measure(&self) -> &MatrixMeasure {
        &self.omega
    }

    pub fn tail(&self) -> &TailCorrection {
        &self.tail
    }

    pub fn tail_error(&self) -> f64 {
        self.tail_error
    }

    fn evaluate(&self, z: Complex64) -> Result<CMatrix, CoreError> {
        let n = self.dim();
        let mut value = self.c.matrix() + self.d.matrix() * z;
        value += self.omega.herglotz_transform(z)?;
        let t = self.tail.evaluate(z);
        if t != Complex64::new(0.0, 0.0) {
            value += CMatrix::identity(n, n) * t;
        }
        Ok(value)
    }
}

/// The supported shapes of a function value.
#[derive(Debug, Clone)]
pub enum Body {
    /// Scalar closed form from the built-in catalog.
    Catalog(CatalogEntry),
    /// Additive integral normal form.
    Representation(Representation),
    /// Pointwise sum of same-dimension functions (the class is closed
    /// under addition).
    Sum(Vec<HerglotzFunction>),
    /// Linear-fractional image of another function under a symplectic
    /// member (the class is closed under that action too).
    Transformed {
        matrix: crate::lft::SymplecticMatrix,
        inner: Box<HerglotzFunction>,
    },
}

/// A matrix-valued function, analytic off the real axis, with positive
/// semidefinite imaginary part in the upper half plane and the reflection
/// symmetry `M(z̄) = M(z)*`.
///
/// Values are immutable and evaluation is pure, so one function may be
/// evaluated concurrently at many points.
#[derive(Debug, Clone)]
pub struct HerglotzFunction {
    dim: usize,
    body: Body,
}

impl HerglotzFunction {
    /// Wrap a catalog closed form.
    pub fn from_catalog(entry: CatalogEntry) -> Self {
        let dim = entry.dim();
        HerglotzFunction {
            dim,
            body: Body::Catalog(entry),
        }
    }

    /// Wrap an additive normal form.
    pub fn from_representation(rep: Representation) -> Self {
        let dim = rep.dim();
        HerglotzFunction {
            dim,
            body: Body::Representation(rep),
        }
    }

    /// Rebuild a catalog entry from its reference data `(C, D, Ω)` as a
    /// normal form. Evaluating the result must agree with the closed form;
    /// that round trip is the strongest internal consistency check the
    /// catalog offers.
    pub fn from_catalog_truth(entry: &CatalogEntry) -> Result<Self, CoreError> {
        let truth = entry.truth()?;
        let rep = Representation::with_tail(
            HermitianMatrix::scaled_identity(1, truth.c),
            HermitianMatrix::scaled_identity(1, truth.d),
            truth.measure,
            truth.tail,
            truth.tail_error,
        )?;
        Ok(HerglotzFunction::from_representation(rep))
    }

    /// Pointwise sum. All parts must share one dimension.
    pub fn sum(parts: Vec<HerglotzFunction>) -> Result<Self, CoreError> {
        let Some(first) = parts.first() else {
            return Err(CoreError::DimensionMismatch {
                context: "sum of zero functions has no dimension".into(),
            });
        };
        let dim = first.dim;
        if let Some(bad) = parts.iter().find(|p| p.dim != dim) {
            return Err(CoreError::DimensionMismatch {
                context: format!("sum mixes dimensions {dim} and {}", bad.dim),
            });
        }
        Ok(HerglotzFunction {
            dim,
            body: Body::Sum(parts),
        })
    }

    /// Wrap the linear-fractional image of `inner` under `matrix`. The
    /// public route is [`crate::lft::apply`], which verifies the pencil
    /// condition on the standard grid before building this body.
    pub(crate) fn transformed(
        matrix: crate::lft::SymplecticMatrix,
        inner: HerglotzFunction,
    ) -> Result<Self, CoreError> {
        if matrix.n() != inner.dim() {
            return Err(CoreError::DimensionMismatch {
                context: format!(
                    "transform acts on {0}×{0} values but the function is {1}×{1}",
                    matrix.n(),
                    inner.dim()
                ),
            });
        }
        let dim = inner.dim();
        Ok(HerglotzFunction {
            dim,
            body: Body::Transformed {
                matrix,
                inner: Box::new(inner),
            },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn body(&self) -> &Body {
        &self.body
    }
}

/// One evaluation: the matrix value at `z` together with a rough bound on
/// the numerical error contributed by quadrature, truncation tails, and
/// rounding.
#[derive(Debug, Clone)]
pub struct EvalResult {
    pub value: CMatrix,
    pub z: Complex64,
    pub condition_estimate: f64,
}

fn check_finite(value: &CMatrix, z: Complex64) -> Result<(), CoreError> {
    if value.iter().all(|e| e.re.is_finite() && e.im.is_finite()) {
        Ok(())
    } else {
        Err(CoreError::NonFinite {
            context: format!("evaluation at {z} produced non-finite entries"),
        })
    }
}

fn eval_upper(h: &HerglotzFunction, z: Complex64) -> Result<(CMatrix, f64), CoreError> {
    match &h.body {
        Body::Catalog(entry) => {
            let v = entry.evaluate(z);
            let value = CMatrix::from_element(1, 1, v);
            Ok((value, f64::EPSILON * (1.0 + v.norm())))
        }
        Body::Representation(rep) => {
            let value = rep.evaluate(z)?;
            Ok((value, tolerances::QUAD_ABS_TOL + rep.tail_error))
        }
        Body::Sum(parts) => {
            let mut value = CMatrix::zeros(h.dim, h.dim);
            let mut cond = 0.0;
            for part in parts {
                let r = evaluate(part, z)?;
                value += r.value;
                cond += r.condition_estimate;
            }
            Ok((value, cond))
        }
        Body::Transformed { matrix, inner } => {
            let r = evaluate(inner, z)?;
            let (value, kappa) = crate::lft::apply_pointwise_detail(matrix, &r.value)
                .map_err(|e| transform_error(e, format!("{z}")))?;
            // The pencil inversion amplifies upstream error by its
            // condition ratio.
            Ok((value, (r.condition_estimate + f64::EPSILON) * kappa))
        }
    }
}

/// Fold a transform failure into this module's error type, tagging the
/// evaluation point it happened at.
fn transform_error(e: crate::lft::LftError, at: String) -> CoreError {
    match e {
        crate::lft::LftError::SingularPencil { context } => CoreError::SingularPencil {
            context: format!("at {at}: {context}"),
        },
        crate::lft::LftError::Core(inner) => inner,
        other => CoreError::DimensionMismatch {
            context: format!("transform failed at {at}: {other}"),
        },
    }
}

/// Evaluate `h` at a point off the real axis. Points in the lower half
/// plane are served through the reflection `M(z) = M(z̄)*`.
pub fn evaluate(h: &HerglotzFunction, z: Complex64) -> Result<EvalResult, CoreError> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(CoreError::NonFinite {
            context: "evaluation point has non-finite coordinates".into(),
        });
    }
    if z.im == 0.0 {
        return Err(CoreError::OnRealAxis { z });
    }
    let (value, condition_estimate) = if z.im < 0.0 {
        let (upper, cond) = eval_upper(h, z.conj())?;
        (upper.adjoint(), cond)
    } else {
        eval_upper(h, z)?
    };
    check_finite(&value, z)?;
    Ok(EvalResult {
        value,
        z,
        condition_estimate,
    })
}

/// Evaluate `h` at a real point away from the support of its measure,
/// where the function extends real-analytically (and Hermitian-valued)
/// across the axis. Points carrying spectral weight are rejected with
/// [`CoreError::OnSupport`].
pub fn evaluate_off_support_real(h: &HerglotzFunction, lambda: f64) -> Result<CMatrix, CoreError> {
    if !lambda.is_finite() {
        return Err(CoreError::NonFinite {
            context: "real evaluation point must be finite".into(),
        });
    }
    let z = Complex64::new(lambda, 0.0);
    let value = match &h.body {
        Body::Catalog(entry) => {
            let v = entry.evaluate(z);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(CoreError::NonFinite {
                    context: format!("closed form blows up at {lambda}"),
                });
            }
            // Off the support the closed form is real on the axis; a
            // substantial imaginary residue means λ sits inside an
            // absolutely continuous piece.
            if v.im.abs() > 1e-9 * (1.0 + v.norm()) {
                return Err(CoreError::OnSupport { lambda });
            }
            CMatrix::from_element(1, 1, Complex64::new(v.re, 0.0))
        }
        Body::Representation(rep) => match rep.evaluate(z) {
            Ok(v) => v,
            Err(CoreError::Measure(MeasureError::AtomOnSingularity { .. }))
            | Err(CoreError::Measure(MeasureError::NotIntegrable { .. })) => {
                return Err(CoreError::OnSupport { lambda })
            }
            Err(e) => return Err(e),
        },
        Body::Sum(parts) => {
            let mut total = CMatrix::zeros(h.dim, h.dim);
            for part in parts {
                total += evaluate_off_support_real(part, lambda)?;
            }
            total
        }
        Body::Transformed { matrix, inner } => {
            let v = evaluate_off_support_real(inner, lambda)?;
            match crate::lft::apply_pointwise(matrix, &v) {
                Ok(w) => w,
                // A singular pencil at a real point where the inner
                // function is regular is a pole of the image: the
                // transform has created an atom there.
                Err(crate::lft::LftError::SingularPencil { .. }) => {
                    return Err(CoreError::OnSupport { lambda })
                }
                Err(e) => return Err(transform_error(e, format!("{lambda}"))),
            }
        }
    };
    check_finite(&value, z)?;
    Ok(value)
}

/// `C = Re M(i)`, the Hermitian centering constant of the normal form.
pub fn extract_c(h: &HerglotzFunction) -> Result<HermitianMatrix, CoreError> {
    let r = evaluate(h, Complex64::new(0.0, 1.0))?;
    Ok(hermitian_split(&r.value).0)
}

/// `D = lim_{η→∞} M(iη)/(iη)`, the linear-growth coefficient, recovered
/// from the ladder `η = 2^k` with iterated Δ²-acceleration. The limit is
/// positive semidefinite for every function of this class; small negative
/// eigenvalues left by the ladder are clamped to zero, gross ones are an
/// error.
pub fn extract_d(h: &HerglotzFunction) -> Result<HermitianMatrix, CoreError> {
    let mut seq = Vec::new();
    for k in tolerances::D_K_MIN..=tolerances::D_K_MAX {
        let z = Complex64::new(0.0, (2.0f64).powi(k as i32));
        let r = evaluate(h, z)?;
        seq.push(r.value * z.finv());
    }
    let accelerated = aitken_matrix_limit(&seq, 2);
    let previous = aitken_matrix_limit(&seq[..seq.len() - 1], 2);
    let gap = (&accelerated - &previous).norm();
    if !gap.is_finite() || gap > tolerances::D_CAUCHY {
        return Err(CoreError::NoConvergence {
            context: format!(
                "growth-coefficient ladder moved by {gap:.3e} in its last step \
                 (threshold {:.1e})",
                tolerances::D_CAUCHY
            ),
        });
    }
    let herm = hermitian_split(&accelerated).0;
    let scale = 1.0 + herm.spectral_norm();
    let floor = 100.0 * tolerances::D_CAUCHY * scale;
    if herm.min_eigenvalue() < -floor {
        return Err(CoreError::NoConvergence {
            context: format!(
                "growth-coefficient ladder settled on a matrix with eigenvalue {:.3e} < 0",
                herm.min_eigenvalue()
            ),
        });
    }
    let clamped = herm.spectral_map(|t| Complex64::new(t.max(0.0), 0.0));
    Ok(HermitianMatrix::symmetrized(&clamped))
}

/// Positivity data at one verification point.
#[derive(Debug, Clone)]
pub struct VerifyPoint {
    pub z: Complex64,
    /// Numerical rank of `Im M(z)`.
    pub rank: usize,
    /// Smallest eigenvalue of `Im M(z)`; positivity means this is not
    /// substantially negative.
    pub min_imag_eigenvalue: f64,
}

/// Result of [`verify_herglotz`]: pointwise positivity of the imaginary
/// part and constancy of its rank across the grid (the kernel of `Im M(z)`
/// does not depend on the point in the upper half plane).
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub dim: usize,
    pub points: Vec<VerifyPoint>,
    /// Rank of `Im M(i)`, the reference point for kernel constancy.
    pub rank_at_reference: usize,
    /// `Some(r)` when every grid point shows the same rank `r`.
    pub common_rank: Option<usize>,
    /// Grid points where `Im M(z)` failed the positivity test, with the
    /// offending smallest eigenvalue.
    pub psd_failures: Vec<(Complex64, f64)>,
    /// True when positivity held everywhere and the rank was constant and
    /// equal to the reference rank.
    pub ok: bool,
}

/// Check the two defining structural facts on a grid in the upper half
/// plane: `Im M(z)` is positive semidefinite at every point, and its rank
/// is the same at every point (equivalently, its kernel is constant).
/// Verification failures are carried in the report, not raised as errors.
pub fn verify_herglotz(
    h: &HerglotzFunction,
    grid: &[Complex64],
) -> Result<VerifyReport, CoreError> {
    if grid.is_empty() {
        return Err(CoreError::BadGrid {
            context: "verification grid is empty".into(),
        });
    }
    if let Some(bad) = grid.iter().find(|z| !(z.im > 0.0)) {
        return Err(CoreError::BadGrid {
            context: format!("verification point {bad} is not in the upper half plane"),
        });
    }
    let reference = evaluate(h, Complex64::new(0.0, 1.0))?;
    let rank_at_reference = numerical_rank(
        &hermitian_split(&reference.value).1,
        tolerances::RANK_REL_TOL,
    );
    let mut points = Vec::with_capacity(grid.len());
    let mut psd_failures = Vec::new();
    for &z in grid {
        let r = evaluate(h, z)?;
        let imag = hermitian_split(&r.value).1;
        let rank = numerical_rank(&imag, tolerances::RANK_REL_TOL);
        let min_imag_eigenvalue = imag.min_eigenvalue();
        if !is_psd(&imag, tolerances::PSD_TOL) {
            psd_failures.push((z, min_imag_eigenvalue));
        }
        points.push(VerifyPoint {
            z,
            rank,
            min_imag_eigenvalue,
        });
    }
    let common_rank = if points.iter().all(|p| p.rank == points[0].rank) {
        Some(points[0].rank)
    } else {
        None
    };
    let ok = psd_failures.is_empty() && common_rank == Some(rank_at_reference);
    Ok(VerifyReport {
        dim: h.dim,
        points,
        rank_at_reference,
        common_rank,
        psd_failures,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{lookup, params};
    use crate::measures::{Atom, MatrixMeasure};
    use approx::assert_abs_diff_eq;
    use std::collections::BTreeMap;

    fn entry(name: &str) -> CatalogEntry {
        lookup(name, &BTreeMap::new()).expect("catalog entry")
    }

    fn entry_with(name: &str, pairs: &[(&str, f64)]) -> CatalogEntry {
        lookup(name, &params(pairs)).expect("catalog entry")
    }

    /// `M(z) = diag(z, −1/z)`: slope diag(1, 0) plus a unit atom at the
    /// origin weighted into the second entry. A handy 2×2 with one entry
    /// growing and one decaying.
    fn diag_growth_and_decay() -> HerglotzFunction {
        let atom = Atom::new(0.0, HermitianMatrix::from_real_diagonal(&[0.0, 1.0])).unwrap();
        let omega = MatrixMeasure::new(2, vec![atom], vec![]).unwrap();
        let rep = Representation::new(
            HermitianMatrix::zeros(2),
            HermitianMatrix::from_real_diagonal(&[1.0, 0.0]),
            omega,
        )
        .unwrap();
        HerglotzFunction::from_representation(rep)
    }

    /// `M(z) = [[z, 1], [1, −1/z]]`: the diagonal model plus a constant
    /// symmetric off-diagonal coupling. Still Herglotz — the imaginary
    /// part is unchanged by the real constant.
    fn coupled_growth_and_decay() -> HerglotzFunction {
        let atom = Atom::new(0.0, HermitianMatrix::from_real_diagonal(&[0.0, 1.0])).unwrap();
        let omega = MatrixMeasure::new(2, vec![atom], vec![]).unwrap();
        let mut c = CMatrix::zeros(2, 2);
        c[(0, 1)] = Complex64::new(1.0, 0.0);
        c[(1, 0)] = Complex64::new(1.0, 0.0);
        let rep = Representation::new(
            HermitianMatrix::new(c).unwrap(),
            HermitianMatrix::from_real_diagonal(&[1.0, 0.0]),
            omega,
        )
        .unwrap();
        HerglotzFunction::from_representation(rep)
    }

    /// `M(z) = diag(−1/z, 5)`: rank-one imaginary part everywhere.
    fn rank_one_pair() -> HerglotzFunction {
        let atom = Atom::new(0.0, HermitianMatrix::from_real_diagonal(&[1.0, 0.0])).unwrap();
        let omega = MatrixMeasure::new(2, vec![atom], vec![]).unwrap();
        let rep = Representation::new(
            HermitianMatrix::from_real_diagonal(&[0.0, 5.0]),
            HermitianMatrix::zeros(2),
            omega,
        )
        .unwrap();
        HerglotzFunction::from_representation(rep)
    }

    fn scalar_at(h: &HerglotzFunction, z: Complex64) -> Complex64 {
        let r = evaluate(h, z).expect("evaluation");
        assert_eq!(r.value.nrows(), 1);
        r.value[(0, 0)]
    }

    #[test]
    fn evaluates_catalog_closed_forms_at_reference_points() {
        let i = Complex64::new(0.0, 1.0);

        let neg_recip = HerglotzFunction::from_catalog(entry("neg_recip"));
        let v = scalar_at(&neg_recip, i);
        assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 1.0, epsilon = 1e-15);

        let affine = HerglotzFunction::from_catalog(entry_with("affine", &[("c", 0.0), ("d", 2.0)]));
        let v = scalar_at(&affine, i);
        assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 2.0, epsilon = 1e-15);

        // tan(i) = i·tanh(1).
        let tan = HerglotzFunction::from_catalog(entry("tan"));
        let v = scalar_at(&tan, i);
        assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.761_594_155_955_764_9, epsilon = 1e-14);

        let r = evaluate(&tan, i).unwrap();
        assert!(r.condition_estimate < 1e-14);
    }

    #[test]
    fn reflection_returns_the_adjoint_for_every_body_kind() {
        let tan = HerglotzFunction::from_catalog(entry("tan"));
        let rep = coupled_growth_and_decay();
        let sum = HerglotzFunction::sum(vec![
            HerglotzFunction::from_catalog(entry("neg_recip")),
            HerglotzFunction::from_catalog(entry_with("affine", &[("c", 0.5), ("d", 1.0)])),
        ])
        .unwrap();

        for h in [&tan, &rep, &sum] {
            for &z in &[
                Complex64::new(0.7, 0.4),
                Complex64::new(-2.3, 1.9),
                Complex64::new(0.0, 0.1),
            ] {
                let up = evaluate(h, z).unwrap().value;
                let down = evaluate(h, z.conj()).unwrap().value;
                assert!(
                    (down - up.adjoint()).norm() <= 1e-12 * (1.0 + up.norm()),
                    "reflection mismatch at {z}"
                );
            }
        }
    }

    #[test]
    fn extract_c_recovers_the_centering_constant() {
        let shifted =
            HerglotzFunction::from_catalog(entry_with("const_imag", &[("c", 3.0), ("d", 1.0)]));
        let c = extract_c(&shifted).unwrap();
        assert_abs_diff_eq!(c.matrix()[(0, 0)].re, 3.0, epsilon = 1e-12);

        let neg_recip = HerglotzFunction::from_catalog(entry("neg_recip"));
        let c = extract_c(&neg_recip).unwrap();
        assert_abs_diff_eq!(c.matrix()[(0, 0)].re, 0.0, epsilon = 1e-12);

        // diag(z, −1/z) is purely imaginary at z = i, so the constant is 0.
        let c = extract_c(&diag_growth_and_decay()).unwrap();
        assert!(c.norm() < 1e-12);
    }

    #[test]
    fn extract_d_recovers_linear_growth() {
        let affine = HerglotzFunction::from_catalog(entry_with("affine", &[("c", 0.0), ("d", 2.0)]));
        let d = extract_d(&affine).unwrap();
        assert_abs_diff_eq!(d.matrix()[(0, 0)].re, 2.0, epsilon = 1e-10);

        let neg_recip = HerglotzFunction::from_catalog(entry("neg_recip"));
        let d = extract_d(&neg_recip).unwrap();
        assert!(d.norm() < 1e-10);

        // M(z) = z·I + diag(−1/z, 0): the decaying part must wash out.
        let atom = Atom::new(0.0, HermitianMatrix::from_real_diagonal(&[1.0, 0.0])).unwrap();
        let omega = MatrixMeasure::new(2, vec![atom], vec![]).unwrap();
        let rep = Representation::new(
            HermitianMatrix::zeros(2),
            HermitianMatrix::identity(2),
            omega,
        )
        .unwrap();
        let d = extract_d(&HerglotzFunction::from_representation(rep)).unwrap();
        let expect = CMatrix::identity(2, 2);
        assert!((d.matrix() - expect).norm() < 1e-8);
    }

    #[test]
    fn representation_round_trip_matches_the_closed_forms() {
        // Entries whose reference data (constant, slope, measure, tail)
        // feed a normal form that must reproduce the closed form.
        let cases = vec![
            entry_with("const_imag", &[("c", 0.5), ("d", 2.0)]),
            entry_with("power_r", &[("r", 0.5)]),
            entry_with("mobius_log", &[("lambda1", 1.0), ("lambda2", 2.0)]),
            entry_with("halfline_m", &[("alpha", std::f64::consts::FRAC_PI_4)]),
            entry("tan"),
        ];
        for e in cases {
            let direct = HerglotzFunction::from_catalog(e.clone());
            let rebuilt = HerglotzFunction::from_catalog_truth(&e).expect("reference data");
            for &z in &tolerances::verification_grid() {
                let a = scalar_at(&direct, z);
                let b = scalar_at(&rebuilt, z);
                assert!(
                    (a - b).norm() <= 1e-6 * (1.0 + a.norm()),
                    "{} round trip drifted at {z}: closed {a}, rebuilt {b}",
                    e.name()
                );
            }
        }
    }

    #[test]
    fn verify_herglotz_reports_psd_and_constant_rank() {
        let grid = tolerances::verification_grid();

        // diag(−1/z, 5): one active entry, rank 1 everywhere.
        let report = verify_herglotz(&rank_one_pair(), &grid).unwrap();
        assert!(report.ok);
        assert!(report.psd_failures.is_empty());
        assert_eq!(report.common_rank, Some(1));
        assert_eq!(report.rank_at_reference, 1);

        // Scalar with strictly positive imaginary part: rank 1.
        let tan = HerglotzFunction::from_catalog(entry("tan"));
        let report = verify_herglotz(&tan, &grid).unwrap();
        assert!(report.ok);
        assert_eq!(report.common_rank, Some(1));

        // [[z, 1], [1, −1/z]]: the verdict must match a direct eigenvalue
        // oracle at every point (the real off-diagonal constant does not
        // touch the imaginary part, which stays diag(y, y/|z|²) ≥ 0).
        let coupled = coupled_growth_and_decay();
        let report = verify_herglotz(&coupled, &grid).unwrap();
        for p in &report.points {
            let value = evaluate(&coupled, p.z).unwrap().value;
            let imag = hermitian_split(&value).1;
            let oracle_psd = imag.min_eigenvalue() >= -tolerances::PSD_TOL;
            let reported_psd = !report.psd_failures.iter().any(|(z, _)| *z == p.z);
            assert_eq!(reported_psd, oracle_psd, "verdict diverged at {}", p.z);
            // Diagonal entries of a function of this class are themselves
            // scalar Herglotz functions.
            for j in 0..2 {
                assert!(imag.matrix()[(j, j)].re >= -tolerances::PSD_TOL);
            }
        }
        assert!(report.ok);
        assert_eq!(report.common_rank, Some(2));
        assert_eq!(report.rank_at_reference, 2);
    }

    #[test]
    fn verify_herglotz_rejects_bad_grids() {
        let tan = HerglotzFunction::from_catalog(entry("tan"));
        assert!(matches!(
            verify_herglotz(&tan, &[]),
            Err(CoreError::BadGrid { .. })
        ));
        assert!(matches!(
            verify_herglotz(&tan, &[Complex64::new(1.0, -0.5)]),
            Err(CoreError::BadGrid { .. })
        ));
    }

    #[test]
    fn sums_add_pointwise_and_require_equal_dimensions() {
        let i = Complex64::new(0.0, 1.0);
        let sum = HerglotzFunction::sum(vec![
            HerglotzFunction::from_catalog(entry("neg_recip")),
            HerglotzFunction::from_catalog(entry_with("affine", &[("c", 0.0), ("d", 1.0)])),
        ])
        .unwrap();
        // −1/i + i = 2i.
        let v = scalar_at(&sum, i);
        assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 2.0, epsilon = 1e-15);

        let mixed = HerglotzFunction::sum(vec![
            HerglotzFunction::from_catalog(entry("tan")),
            diag_growth_and_decay(),
        ]);
        assert!(matches!(
            mixed,
            Err(CoreError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            HerglotzFunction::sum(vec![]),
            Err(CoreError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn real_axis_evaluation_is_rejected() {
        let tan = HerglotzFunction::from_catalog(entry("tan"));
        for z in [Complex64::new(0.5, 0.0), Complex64::new(0.5, -0.0)] {
            assert!(matches!(
                evaluate(&tan, z),
                Err(CoreError::OnRealAxis { .. })
            ));
        }
    }

    #[test]
    fn real_points_off_the_support_evaluate_cleanly() {
        // −1/z at λ = 2 → −1/2.
        let neg_recip = HerglotzFunction::from_catalog(entry("neg_recip"));
        let v = evaluate_off_support_real(&neg_recip, 2.0).unwrap();
        assert_abs_diff_eq!(v[(0, 0)].re, -0.5, epsilon = 1e-15);

        // ln((z−2)/(z−1)) at λ = 5 → ln(3/4).
        let mlog =
            HerglotzFunction::from_catalog(entry_with("mobius_log", &[("lambda1", 1.0), ("lambda2", 2.0)]));
        let v = evaluate_off_support_real(&mlog, 5.0).unwrap();
        assert_abs_diff_eq!(v[(0, 0)].re, (0.75f64).ln(), epsilon = 1e-14);

        // Rebuilt (z−1)/z = 1 − 1/z from its atom data, at λ = 5 → 0.8.
        let matom =
            entry_with("mobius_atom", &[("lambda1", 0.0), ("lambda2", 1.0)]);
        let rebuilt = HerglotzFunction::from_catalog_truth(&matom).unwrap();
        let v = evaluate_off_support_real(&rebuilt, 5.0).unwrap();
        assert_abs_diff_eq!(v[(0, 0)].re, 0.8, epsilon = 1e-10);

        // The same function queried on its atom is an on-support error.
        assert!(matches!(
            evaluate_off_support_real(&rebuilt, 0.0),
            Err(CoreError::OnSupport { .. })
        ));
        // The closed form itself blows up there.
        assert!(matches!(
            evaluate_off_support_real(&neg_recip, 0.0),
            Err(CoreError::NonFinite { .. })
        ));
        // Inside an absolutely continuous piece the closed form keeps a
        // positive imaginary boundary value, which is also rejected.
        let power = HerglotzFunction::from_catalog(entry_with("power_r", &[("r", 0.5)]));
        assert!(matches!(
            evaluate_off_support_real(&power, -1.0),
            Err(CoreError::OnSupport { .. })
        ));
    }

    #[test]
    fn representation_constructor_validates_its_pieces() {
        // Slope with a negative eigenvalue must be refused.
        let omega = MatrixMeasure::zero(1);
        let bad = Representation::new(
            HermitianMatrix::zeros(1),
            HermitianMatrix::from_real_diagonal(&[-1.0]),
            omega,
        );
        assert!(matches!(bad, Err(CoreError::NotPSD { .. })));

        // Mixed dimensions must be refused.
        let bad = Representation::new(
            HermitianMatrix::zeros(2),
            HermitianMatrix::zeros(2),
            MatrixMeasure::zero(1),
        );
        assert!(matches!(bad, Err(CoreError::DimensionMismatch { .. })));
    }
}
