//! Symplectic block matrices and their linear-fractional action on
//! matrix-valued Herglotz functions.
//!
//! The group consists of `2n×2n` complex matrices `A` with `A*JA = J`,
//! where `J = [[0, −I],[I, 0]]` in `n×n` blocks. Such an `A`, written in
//! blocks `[[A11, A12],[A21, A22]]`, acts on an `n×n` matrix `M` with
//! positive semidefinite imaginary part by
//!
//! ```text
//! M ↦ (A21 + A22·M)(A11 + A12·M)⁻¹,
//! ```
//!
//! and the action preserves the Herglotz class pointwise in `z`. This
//! module provides membership testing, block-formula inverses, the
//! pointwise action and its inverse, whole-function transforms, seeded
//! random members built from generators, and the closed-form mass of a
//! point spectrum atom created by a scalar transform.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boundary::{self, BoundaryData, BoundaryError};
use crate::catalog::TailCorrection;
use crate::herglotz_core::{self, Body, CoreError, HerglotzFunction};
use crate::matrix_kernel::{hermitian_split, CMatrix, HermitianMatrix};
use crate::measures::{MeasureError, Weight};
use crate::tolerances;

/// Errors from symplectic constructions and transforms.
#[derive(Debug, thiserror::Error)]
pub enum LftError {
    /// The candidate matrix fails the defining congruence `A*JA = J`.
    #[error("matrix is not in the symplectic class: residual {residual:.3e}")]
    NotSymplectic { residual: f64 },
    /// The first pencil block `A11 + A12·M` (or its recovery-direction
    /// counterpart) is numerically singular.
    #[error("singular pencil: {context}")]
    SingularPencil { context: String },
    /// A hypothesis of the point-mass formula fails at the requested point.
    #[error("condition not met: {context}")]
    ConditionNotMet { context: String },
    /// Arguments outside the documented domain of an operation.
    #[error("bad input: {context}")]
    BadInput { context: String },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// The standard skew form `J = [[0, −I],[I, 0]]` as a `2n×2n` matrix.
fn standard_j(n: usize) -> CMatrix {
    let mut j = CMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k, n + k)] = Complex64::new(-1.0, 0.0);
        j[(n + k, k)] = Complex64::new(1.0, 0.0);
    }
    j
}

/// `‖A*JA − J‖` (Frobenius) for an even-dimensional square matrix.
fn membership_residual(a: &CMatrix) -> f64 {
    let n = a.nrows() / 2;
    let j = standard_j(n);
    (a.adjoint() * &j * a - j).norm()
}

/// Whether `a` satisfies the defining congruence `A*JA = J` within `tol`.
///
/// Returns `false` (rather than an error) for shapes that cannot belong to
/// the class: non-square or odd-dimensional matrices.
pub fn is_member(a: &CMatrix, tol: f64) -> bool {
    if a.nrows() != a.ncols() || a.nrows() == 0 || a.nrows() % 2 != 0 {
        return false;
    }
    membership_residual(a) <= tol
}

/// A member of the symplectic class, stored blockwise. Construction
/// verifies the congruence `A*JA = J`, so every value of this type is a
/// certified member.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    n: usize,
    a11: CMatrix,
    a12: CMatrix,
    a21: CMatrix,
    a22: CMatrix,
}

impl SymplecticMatrix {
    /// Assemble from four `n×n` blocks and verify membership.
    pub fn from_blocks(
        a11: CMatrix,
        a12: CMatrix,
        a21: CMatrix,
        a22: CMatrix,
    ) -> Result<Self, LftError> {
        let n = a11.nrows();
        for (name, b) in [("A11", &a11), ("A12", &a12), ("A21", &a21), ("A22", &a22)] {
            if b.nrows() != n || b.ncols() != n {
                return Err(LftError::BadInput {
                    context: format!(
                        "block {name} is {}×{} but {n}×{n} was expected",
                        b.nrows(),
                        b.ncols()
                    ),
                });
            }
        }
        if n == 0 {
            return Err(LftError::BadInput {
                context: "blocks must be nonempty".into(),
            });
        }
        let candidate = SymplecticMatrix {
            n,
            a11,
            a12,
            a21,
            a22,
        };
        let residual = membership_residual(&candidate.matrix());
        if !(residual <= tolerances::SYMPLECTIC_TOL) {
            return Err(LftError::NotSymplectic { residual });
        }
        Ok(candidate)
    }

    /// Split a `2n×2n` matrix into blocks and verify membership.
    pub fn from_matrix(m: &CMatrix) -> Result<Self, LftError> {
        if m.nrows() != m.ncols() || m.nrows() == 0 || m.nrows() % 2 != 0 {
            return Err(LftError::BadInput {
                context: format!(
                    "a member must be square with even dimension, got {}×{}",
                    m.nrows(),
                    m.ncols()
                ),
            });
        }
        let n = m.nrows() / 2;
        SymplecticMatrix::from_blocks(
            m.view((0, 0), (n, n)).into_owned(),
            m.view((0, n), (n, n)).into_owned(),
            m.view((n, 0), (n, n)).into_owned(),
            m.view((n, n), (n, n)).into_owned(),
        )
    }

    /// The identity member (trivial transform).
    pub fn identity(n: usize) -> Self {
        let id = CMatrix::identity(n, n);
        let z = CMatrix::zeros(n, n);
        SymplecticMatrix::from_blocks(id.clone(), z.clone(), z, id)
            .expect("the identity satisfies the congruence exactly")
    }

    /// The skew form itself, `[[0, −I],[I, 0]]`, whose transform is
    /// `M ↦ −M⁻¹`.
    pub fn j(n: usize) -> Self {
        let id = CMatrix::identity(n, n);
        let z = CMatrix::zeros(n, n);
        SymplecticMatrix::from_blocks(z.clone(), -&id, id, z)
            .expect("the skew form satisfies the congruence exactly")
    }

    /// Real rotation member with blocks
    /// `[[cos(β−α)·I, sin(β−α)·I],[−sin(β−α)·I, cos(β−α)·I]]`.
    ///
    /// For `β = α` this is the identity. At `n = 1` it carries the
    /// half-line boundary function with parameter `α` to the one with
    /// parameter `β`.
    pub fn rotation(alpha: f64, beta: f64, n: usize) -> Self {
        let (s, c) = (beta - alpha).sin_cos();
        let cs = |t: f64| CMatrix::identity(n, n) * Complex64::new(t, 0.0);
        SymplecticMatrix::from_blocks(cs(c), cs(s), cs(-s), cs(c))
            .expect("a real rotation satisfies the congruence to rounding")
    }

    /// Upper shear `[[I, T],[0, I]]` with Hermitian `T`. Its transform is
    /// `M ↦ M(I + T·M)⁻¹`, the resolvent-difference perturbation law.
    pub fn shear(t: &HermitianMatrix) -> Self {
        let n = t.dim();
        let id = CMatrix::identity(n, n);
        let z = CMatrix::zeros(n, n);
        SymplecticMatrix::from_blocks(id.clone(), t.matrix().clone(), z, id)
            .expect("an upper shear with Hermitian block is a member exactly")
    }

    /// Lower shear `[[I, 0],[S, I]]` with Hermitian `S`. Its transform is
    /// the additive perturbation `M ↦ S + M`.
    pub fn shear_down(s: &HermitianMatrix) -> Self {
        let n = s.dim();
        let id = CMatrix::identity(n, n);
        let z = CMatrix::zeros(n, n);
        SymplecticMatrix::from_blocks(id.clone(), z, s.matrix().clone(), id)
            .expect("a lower shear with Hermitian block is a member exactly")
    }

    /// Block-diagonal member `[[U, 0],[0, U]]`; requires `U` unitary. Its
    /// transform is the unitary conjugation `M ↦ U·M·U*`; the membership
    /// check rejects non-unitary `U`.
    pub fn unitary(u: &CMatrix) -> Result<Self, LftError> {
        if u.nrows() != u.ncols() || u.nrows() == 0 {
            return Err(LftError::BadInput {
                context: format!("unitary block must be square, got {}×{}", u.nrows(), u.ncols()),
            });
        }
        let n = u.nrows();
        let z = CMatrix::zeros(n, n);
        SymplecticMatrix::from_blocks(u.clone(), z.clone(), z, u.clone())
    }

    /// Block size `n` (the member is `2n×2n`).
    pub fn n(&self) -> usize {
        self.n
    }

    /// The four blocks `(A11, A12, A21, A22)`.
    pub fn blocks(&self) -> (&CMatrix, &CMatrix, &CMatrix, &CMatrix) {
        (&self.a11, &self.a12, &self.a21, &self.a22)
    }

    /// Assemble the full `2n×2n` matrix.
    pub fn matrix(&self) -> CMatrix {
        let n = self.n;
        let mut m = CMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&self.a11);
        m.view_mut((0, n), (n, n)).copy_from(&self.a12);
        m.view_mut((n, 0), (n, n)).copy_from(&self.a21);
        m.view_mut((n, n), (n, n)).copy_from(&self.a22);
        m
    }

    /// `‖A*JA − J‖` for this member (small by construction).
    pub fn residual(&self) -> f64 {
        membership_residual(&self.matrix())
    }

    /// Block product `self · rhs`. The result is re-verified, so rounding
    /// drift beyond the membership tolerance is caught rather than
    /// silently propagated.
    pub fn multiply(&self, rhs: &SymplecticMatrix) -> Result<SymplecticMatrix, LftError> {
        if self.n != rhs.n {
            return Err(LftError::BadInput {
                context: format!("cannot multiply block sizes {} and {}", self.n, rhs.n),
            });
        }
        SymplecticMatrix::from_blocks(
            &self.a11 * &rhs.a11 + &self.a12 * &rhs.a21,
            &self.a11 * &rhs.a12 + &self.a12 * &rhs.a22,
            &self.a21 * &rhs.a11 + &self.a22 * &rhs.a21,
            &self.a21 * &rhs.a12 + &self.a22 * &rhs.a22,
        )
    }

    /// The inverse member `[[A22*, −A12*],[−A21*, A11*]]`. For a certified
    /// member this block formula is exact (no linear solve involved), and
    /// left inverses in the class are two-sided.
    pub fn inverse(&self) -> SymplecticMatrix {
        SymplecticMatrix {
            n: self.n,
            a11: self.a22.adjoint(),
            a12: -self.a12.adjoint(),
            a21: -self.a21.adjoint(),
            a22: self.a11.adjoint(),
        }
    }
}

/// Invert via singular value decomposition with an explicit smallest
/// singular value guard: `σ_min < threshold·σ_max` counts as singular.
/// Returns the inverse and the condition ratio `σ_max/σ_min`.
pub(crate) fn guarded_inverse(m: &CMatrix, what: &str) -> Result<(CMatrix, f64), LftError> {
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0_f64, f64::max);
    let smin = svd
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if !smax.is_finite() || smax == 0.0 || smin < tolerances::PENCIL_SIGMA_TOL * smax {
        return Err(LftError::SingularPencil {
            context: format!("{what} has singular values in [{smin:.3e}, {smax:.3e}]"),
        });
    }
    let u = svd.u.as_ref().expect("vectors were requested");
    let vt = svd.v_t.as_ref().expect("vectors were requested");
    let sigma_inv = CMatrix::from_diagonal(&DVector::from_iterator(
        svd.singular_values.len(),
        svd.singular_values
            .iter()
            .map(|s| Complex64::new(1.0 / s, 0.0)),
    ));
    Ok((vt.adjoint() * sigma_inv * u.adjoint(), smax / smin))
}

/// Pointwise transform together with the condition ratio of the pencil
/// block, used to widen evaluation error estimates.
pub(crate) fn apply_pointwise_detail(
    a: &SymplecticMatrix,
    m: &CMatrix,
) -> Result<(CMatrix, f64), LftError> {
    if m.nrows() != a.n || m.ncols() != a.n {
        return Err(LftError::BadInput {
            context: format!(
                "transform acts on {0}×{0} values, got {1}×{2}",
                a.n,
                m.nrows(),
                m.ncols()
            ),
        });
    }
    let pencil = &a.a11 + &a.a12 * m;
    let (pinv, kappa) = guarded_inverse(&pencil, "pencil A11 + A12·M")?;
    Ok(((&a.a21 + &a.a22 * m) * pinv, kappa))
}

/// The pointwise action `M ↦ (A21 + A22·M)(A11 + A12·M)⁻¹`.
///
/// For `Im M` positive definite the pencil is provably invertible; a
/// positive *semi*definite imaginary part with nontrivial kernel can make
/// it singular, reported as [`LftError::SingularPencil`].
pub fn apply_pointwise(a: &SymplecticMatrix, m: &CMatrix) -> Result<CMatrix, LftError> {
    apply_pointwise_detail(a, m).map(|(v, _)| v)
}

/// The inverse direction: recover `M` from `MA = apply_pointwise(A, M)`
/// via `M = −(A21* − A11*·MA)(A22* − A12*·MA)⁻¹`.
pub fn invert_pointwise(a: &SymplecticMatrix, ma: &CMatrix) -> Result<CMatrix, LftError> {
    if ma.nrows() != a.n || ma.ncols() != a.n {
        return Err(LftError::BadInput {
            context: format!(
                "transform produces {0}×{0} values, got {1}×{2}",
                a.n,
                ma.nrows(),
                ma.ncols()
            ),
        });
    }
    let q = a.a22.adjoint() - a.a12.adjoint() * ma;
    let (qinv, _) = guarded_inverse(&q, "recovery pencil A22* − A12*·MA")?;
    Ok(-(a.a21.adjoint() - a.a11.adjoint() * ma) * qinv)
}

/// Residuals of the exact algebraic identities tying a value `M` (with
/// `Im M ≥ 0`) to its transform `MA`. All four vanish in exact
/// arithmetic for any member.
#[derive(Debug, Clone, Copy)]
pub struct IdentityResiduals {
    /// `‖Im MA − B*·(Im M)·B‖` with `B = (A11 + A12·M)⁻¹`.
    pub imag_congruence: f64,
    /// `‖(A22* − A12*·MA)(A11 + A12·M) − I‖`: the recovery pencil is the
    /// exact inverse of the forward pencil.
    pub inverse_pencil_product: f64,
    /// `‖invert_pointwise(A, MA) − M‖`.
    pub recovery_roundtrip: f64,
    /// `‖Im M − P*·(Im MA)·P‖` with `P = A11 + A12·M` (the congruence in
    /// the recovery direction).
    pub imag_congruence_reverse: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        self.imag_congruence
            .max(self.inverse_pencil_product)
            .max(self.recovery_roundtrip)
            .max(self.imag_congruence_reverse)
    }
}

/// Evaluate the identity suite at one matrix value.
pub fn identity_residuals(
    a: &SymplecticMatrix,
    m: &CMatrix,
) -> Result<IdentityResiduals, LftError> {
    let (ma, _) = apply_pointwise_detail(a, m)?;
    let pencil = &a.a11 + &a.a12 * m;
    let (pinv, _) = guarded_inverse(&pencil, "pencil A11 + A12·M")?;
    let im_m = hermitian_split(m).1.into_matrix();
    let im_ma = hermitian_split(&ma).1.into_matrix();
    let q = a.a22.adjoint() - a.a12.adjoint() * &ma;
    let id = CMatrix::identity(a.n, a.n);
    let recovered = invert_pointwise(a, &ma)?;
    Ok(IdentityResiduals {
        imag_congruence: (&im_ma - pinv.adjoint() * &im_m * &pinv).norm(),
        inverse_pencil_product: (q * &pencil - id).norm(),
        recovery_roundtrip: (recovered - m).norm(),
        imag_congruence_reverse: (im_m - pencil.adjoint() * im_ma * pencil).norm(),
    })
}

/// Transform a whole function. The pencil condition is verified at every
/// point of the standard grid before the lazily-evaluated image is
/// returned; a singular pencil is reported with the witness point.
pub fn apply(a: &SymplecticMatrix, h: &HerglotzFunction) -> Result<HerglotzFunction, LftError> {
    if a.n != h.dim() {
        return Err(LftError::BadInput {
            context: format!(
                "member block size {} does not match function dimension {}",
                a.n,
                h.dim()
            ),
        });
    }
    for z in tolerances::verification_grid() {
        let r = herglotz_core::evaluate(h, z)?;
        apply_pointwise_detail(a, &r.value).map_err(|e| match e {
            LftError::SingularPencil { context } => LftError::SingularPencil {
                context: format!("at grid point {z}: {context}"),
            },
            other => other,
        })?;
    }
    HerglotzFunction::transformed(a.clone(), h.clone()).map_err(LftError::Core)
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let x = CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    HermitianMatrix::symmetrized(&x)
}

/// Deterministic seeded member: a product of 3–8 generators drawn from
/// the three families (upper shear, lower shear, unitary block-diagonal),
/// each a member by construction.
pub fn random_member(n: usize, seed: u64) -> SymplecticMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SymplecticMatrix::identity(n);
    let factors = rng.gen_range(3..=8);
    for _ in 0..factors {
        let hm = random_hermitian(n, &mut rng);
        let factor = match rng.gen_range(0..3) {
            0 => SymplecticMatrix::shear(&hm),
            1 => SymplecticMatrix::shear_down(&hm),
            _ => {
                let u = hm.spectral_map(|t| Complex64::new(0.0, t).exp());
                SymplecticMatrix::unitary(&u)
                    .expect("the exponential of i times a Hermitian matrix is unitary")
            }
        };
        out = out
            .multiply(&factor)
            .expect("products of members stay within the membership tolerance");
    }
    out
}

/// Mass of the point the scalar transform `m ↦ (a21 + a22·m)/(a11 + a12·m)`
/// creates at `λ`:
///
/// ```text
/// ω_a({λ}) = |a12|⁻² · ( d + ∫ dω(λ′) (λ′ − λ)⁻² )⁻¹,
/// ```
///
/// valid when the boundary value `m(λ+i0)` equals `−a11/a12` (the pole
/// condition of the transformed function). The slope `d` and measure `ω`
/// must be explicitly known: the function body must be a normal form or a
/// catalog entry with reference data. Truncated atom families contribute
/// their analytic remainder through the derivative of the tail-correction
/// closed form.
pub fn point_mass_formula(
    h: &HerglotzFunction,
    a: &SymplecticMatrix,
    lambda: f64,
) -> Result<f64, LftError> {
    if a.n != 1 || h.dim() != 1 {
        return Err(LftError::BadInput {
            context: "the point-mass formula is scalar: block size and dimension must be 1".into(),
        });
    }
    if !lambda.is_finite() {
        return Err(LftError::BadInput {
            context: "the point must be finite".into(),
        });
    }
    let a11 = a.a11[(0, 0)];
    let a12 = a.a12[(0, 0)];
    if a12.norm() == 0.0 {
        return Err(LftError::BadInput {
            context: "with a vanishing (1,2) entry the transform creates no new point masses"
                .into(),
        });
    }
    let target = -a11 / a12;
    let limit = boundary::boundary_limit(h, lambda)?;
    let m0 = match &limit.value {
        BoundaryData::Divergent => {
            return Err(LftError::ConditionNotMet {
                context: format!(
                    "boundary value at {lambda} diverges instead of settling at {target}"
                ),
            })
        }
        BoundaryData::Finite(m) => m[(0, 0)],
    };
    if (m0 - target).norm() > tolerances::POINT_MASS_CONDITION_TOL {
        return Err(LftError::ConditionNotMet {
            context: format!(
                "boundary value {m0} at {lambda} is not the pole condition value {target}"
            ),
        });
    }
    let (d, omega, tail) = match h.body() {
        Body::Representation(rep) => (
            rep.slope().matrix()[(0, 0)].re,
            rep.measure().clone(),
            rep.tail().clone(),
        ),
        Body::Catalog(entry) => {
            let truth = entry.truth().map_err(CoreError::from)?;
            (truth.d, truth.measure, truth.tail)
        }
        _ => {
            return Err(LftError::BadInput {
                context: "the formula needs an explicit slope and measure; \
                          sums and transforms do not carry one"
                    .into(),
            })
        }
    };
    let verdict =
        omega.moment_integral(&Weight::RecipSqDistance(lambda), f64::NEG_INFINITY, f64::INFINITY)?;
    if verdict.divergent {
        // An infinite derivative integral makes the reciprocal vanish: the
        // transformed function has no atom at λ.
        return Ok(0.0);
    }
    let Some(base) = verdict.scalar_value() else {
        return Err(LftError::Core(CoreError::NoConvergence {
            context: format!("derivative moment integral at {lambda} was inconclusive"),
        }));
    };
    // d/dz of the truncation remainder restores the part of the derivative
    // integral carried by the discarded far atoms. The remainder is
    // analytic near real λ (all discarded atoms are far away), so a central
    // difference is accurate to far better than the formula's own error.
    let tail_derivative = match &tail {
        TailCorrection::None => 0.0,
        t => {
            let step = 1e-3;
            let plus = t.evaluate(Complex64::new(lambda + step, 0.0));
            let minus = t.evaluate(Complex64::new(lambda - step, 0.0));
            ((plus - minus) / (2.0 * step)).re
        }
    };
    let denom = d + base + tail_derivative;
    if !(denom > 0.0) {
        return Err(LftError::BadInput {
            context: format!(
                "slope and derivative integral sum to {denom:.3e}; \
                 the function is constant at the pole condition value"
            ),
        });
    }
    Ok(1.0 / (a12.norm_sqr() * denom))
}
