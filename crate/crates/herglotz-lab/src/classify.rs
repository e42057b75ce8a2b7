//! Spectral classification of real points, rank-invariance reports,
//! exponential representations (ξ/Ξ), and two-spectra reconstruction.
//!
//! Everything here reads a function only through its boundary behaviour
//! `M(λ+iε)` as ε ↓ 0: atoms show up in `ε·Im M`, absolutely continuous
//! spectrum in the finite limit of `Im M`, singular behaviour in ladder
//! divergence, and the phase matrix `Ξ = π⁻¹·Im ln M` in the argument.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_PI;
use std::fmt;

use num_complex::Complex64;

use crate::boundary::{self, BoundaryData, BoundaryError, BoundaryProfile, BoundaryValue};
use crate::catalog::lookup;
use crate::herglotz_core::{self, CoreError, HerglotzFunction, Representation};
use crate::ladders::aitken_limit;
use crate::lft::{self, LftError, SymplecticMatrix};
use crate::matrix_kernel::{
    hermitian_split, principal_log, CMatrix, HermitianMatrix, MatrixKernelError,
};
use crate::measures::{Atom, MatrixMeasure, MeasureError};
use crate::tolerances;

/// Errors from classification, phase extraction, and reconstruction.
#[derive(Debug, thiserror::Error)]
pub enum ClassifyError {
    /// A scalar function value vanished exactly on the evaluation ladder,
    /// so its argument is undefined.
    #[error("function value vanished at {lambda}+iε on the ladder")]
    ZeroEncountered { lambda: f64 },
    /// A matrix value was singular or too defective to take a logarithm.
    #[error("matrix value is singular or defective: {context}")]
    SingularM { context: String },
    /// The matrix logarithm is undefined because the spectrum touches the
    /// cut along the closed negative real axis.
    #[error("spectrum touches the logarithm cut: {context}")]
    SpectrumOnCut { context: String },
    /// The pole and zero lists do not strictly interlace.
    #[error("poles and zeros do not interlace: {context}")]
    InterlacingViolation { context: String },
    /// The supplied normalization cannot fix the reconstruction constant.
    #[error("normalization cannot fix the reconstruction: {context}")]
    NormalizationInsufficient { context: String },
    /// An extrapolation ladder failed its acceptance test.
    #[error("ladder did not converge: {context}")]
    NoConvergence { context: String },
    /// Arguments outside the documented domain of an operation.
    #[error("bad input: {context}")]
    BadInput { context: String },
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Lft(#[from] LftError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// The spectral type of a single real point.
///
/// Ranks count eigenvalue directions above the detection floors: for
/// `PurePoint`, eigenvalues of the extrapolated `ε·Im M` limit; for
/// `AbsolutelyContinuous`, eigenvalues of the finite boundary imaginary
/// part. A point-mass verdict takes precedence — at an atom the imaginary
/// part diverges, but the point is still pure point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralTag {
    AbsolutelyContinuous { rank: usize },
    PurePoint { rank: usize },
    SingularContinuous,
    Singular,
    NoSpectrum,
    Inconclusive,
}

impl fmt::Display for SpectralTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralTag::AbsolutelyContinuous { rank } => write!(f, "AC({rank})"),
            SpectralTag::PurePoint { rank } => write!(f, "PP({rank})"),
            SpectralTag::SingularContinuous => write!(f, "SC"),
            SpectralTag::Singular => write!(f, "S"),
            SpectralTag::NoSpectrum => write!(f, "NONE"),
            SpectralTag::Inconclusive => write!(f, "INCONCLUSIVE"),
        }
    }
}

impl SpectralTag {
    /// The rank carried by the tag (zero for rankless tags).
    pub fn rank(&self) -> usize {
        match self {
            SpectralTag::AbsolutelyContinuous { rank } | SpectralTag::PurePoint { rank } => *rank,
            _ => 0,
        }
    }
}

/// Number of eigenvalues at or above `floor`.
fn detection_rank(w: &HermitianMatrix, floor: f64) -> usize {
    w.eigenvalues().iter().filter(|&&t| t >= floor).count()
}

/// Placeholder boundary value for points where the ladder failed: finite
/// NaN entries, an empty ladder, and an infinite extrapolation error.
fn undetermined_value(n: usize, lambda: f64) -> BoundaryValue {
    BoundaryValue {
        lambda,
        value: BoundaryData::Finite(CMatrix::from_element(
            n,
            n,
            Complex64::new(f64::NAN, f64::NAN),
        )),
        epsilon_ladder: vec![],
        extrapolation_error: f64::INFINITY,
    }
}

/// Classify one real point and keep the boundary evidence that produced
/// the verdict (for profile/CSV assembly).
pub fn classify_with_evidence(
    h: &HerglotzFunction,
    lambda: f64,
) -> (SpectralTag, BoundaryValue) {
    let n = h.dim();
    let mass = boundary::point_mass(h, lambda).ok();
    let (bv, undetermined) = match boundary::boundary_limit(h, lambda) {
        Ok(bv) => (bv, false),
        Err(_) => (undetermined_value(n, lambda), true),
    };
    // Point-mass verdict first: an atom forces Im M to diverge, so the
    // divergence tags must not be allowed to shadow it.
    if let Some(w) = &mass {
        let r = detection_rank(w, tolerances::POINT_MASS_FLOOR);
        if r >= 1 {
            return (SpectralTag::PurePoint { rank: r }, bv);
        }
    }
    if undetermined {
        return (SpectralTag::Inconclusive, bv);
    }
    let tag = match &bv.value {
        BoundaryData::Finite(m0) => {
            let r = detection_rank(&hermitian_split(m0).1, tolerances::AC_IMAG_FLOOR);
            if r >= 1 {
                SpectralTag::AbsolutelyContinuous { rank: r }
            } else {
                SpectralTag::NoSpectrum
            }
        }
        BoundaryData::Divergent => {
            // Divergence without an atom: singular. If additionally the
            // whole of ε·M(λ+iε) is certified to vanish, the singular part
            // carries no mass at the point — the continuous-singular
            // signature.
            let mass_vanishes = matches!(
                &mass,
                Some(w) if w.spectral_norm() <= tolerances::POINT_MASS_FLOOR
            );
            let re_vanishes = boundary::real_part_vanishing(h, lambda).unwrap_or(false);
            if mass_vanishes && re_vanishes {
                SpectralTag::SingularContinuous
            } else {
                SpectralTag::Singular
            }
        }
    };
    (tag, bv)
}

/// Spectral tag of `h` at `lambda`. Ladder failures surface as
/// [`SpectralTag::Inconclusive`] rather than an error.
pub fn classify_point(h: &HerglotzFunction, lambda: f64) -> SpectralTag {
    classify_with_evidence(h, lambda).0
}

/// Classification sweep along a sorted grid: per-point tags plus the
/// boundary profile that carries the evidence (and exports to CSV).
#[derive(Debug, Clone)]
pub struct SupportScan {
    pub profile: BoundaryProfile,
    pub tags: Vec<SpectralTag>,
}

impl SupportScan {
    /// Grid points tagged absolutely continuous, keyed by rank.
    pub fn ac_sets(&self) -> BTreeMap<usize, Vec<f64>> {
        let mut out: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for (v, tag) in self.profile.values.iter().zip(&self.tags) {
            if let SpectralTag::AbsolutelyContinuous { rank } = tag {
                out.entry(*rank).or_default().push(v.lambda);
            }
        }
        out
    }
}

/// Classify every point of a strictly increasing grid.
pub fn scan_support(h: &HerglotzFunction, grid: &[f64]) -> Result<SupportScan, ClassifyError> {
    let mut values = Vec::with_capacity(grid.len());
    let mut ranks = Vec::with_capacity(grid.len());
    let mut tags = Vec::with_capacity(grid.len());
    let mut tag_strings = Vec::with_capacity(grid.len());
    for &lambda in grid {
        let (tag, bv) = classify_with_evidence(h, lambda);
        values.push(bv);
        ranks.push(tag.rank());
        tag_strings.push(tag.to_string());
        tags.push(tag);
    }
    let profile = BoundaryProfile::new(h.dim(), values, ranks, tag_strings)?;
    Ok(SupportScan { profile, tags })
}

/// One grid point of a rank-invariance comparison.
#[derive(Debug, Clone, Copy)]
pub struct AdPoint {
    pub lambda: f64,
    /// Rank of the base function's boundary imaginary part, where finite.
    pub base_rank: Option<usize>,
    /// Rank for the transformed function, where finite.
    pub image_rank: Option<usize>,
}

impl AdPoint {
    /// Both limits finite and ranks equal?
    pub fn agrees(&self) -> Option<bool> {
        match (self.base_rank, self.image_rank) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        }
    }
}

/// Report of the rank-invariance check: the absolutely continuous rank of
/// the boundary imaginary part is unchanged by any symplectic transform.
#[derive(Debug, Clone)]
pub struct AdInvarianceReport {
    pub points: Vec<AdPoint>,
    /// Number of points where both limits were finite and comparable.
    pub compared: usize,
    /// Grid points where the two ranks disagree (expected empty).
    pub violations: Vec<f64>,
    pub ok: bool,
}

fn finite_imag_rank(h: &HerglotzFunction, lambda: f64) -> Option<usize> {
    match boundary::boundary_limit(h, lambda) {
        Ok(bv) => bv
            .finite()
            .map(|m0| detection_rank(&hermitian_split(m0).1, tolerances::AC_IMAG_FLOOR)),
        Err(_) => None,
    }
}

/// Compare `rank(Im M(λ+i0))` with `rank(Im M_A(λ+i0))` over a grid.
pub fn ad_invariance(
    h: &HerglotzFunction,
    a: &SymplecticMatrix,
    grid: &[f64],
) -> Result<AdInvarianceReport, ClassifyError> {
    let image = lft::apply(a, h)?;
    let mut points = Vec::with_capacity(grid.len());
    let mut violations = Vec::new();
    let mut compared = 0;
    for &lambda in grid {
        let base_rank = finite_imag_rank(h, lambda);
        let image_rank = finite_imag_rank(&image, lambda);
        let point = AdPoint {
            lambda,
            base_rank,
            image_rank,
        };
        if let Some(equal) = point.agrees() {
            compared += 1;
            if !equal {
                violations.push(lambda);
            }
        }
        points.push(point);
    }
    Ok(AdInvarianceReport {
        points,
        compared,
        ok: violations.is_empty(),
        violations,
    })
}

/// One extrapolated phase value, with the clamping bookkeeping.
#[derive(Debug, Clone)]
pub struct XiSample {
    pub lambda: f64,
    /// The phase matrix clamped into the order interval `[0, I]`.
    pub value: HermitianMatrix,
    /// How far the raw extrapolant sat outside `[0, I]` (eigenvalue
    /// distance; zero when no clamping happened).
    pub clamp_distance: f64,
    pub extrapolation_error: f64,
}

/// ε-ladder of `π⁻¹·Im ln M(λ+iε)` samples.
fn xi_ladder(h: &HerglotzFunction, lambda: f64) -> Result<Vec<CMatrix>, ClassifyError> {
    let n = h.dim();
    let mut samples = Vec::new();
    for k in tolerances::BV_K_MIN..=tolerances::BV_K_MAX {
        let eps = 0.5f64.powi(k as i32);
        let r = herglotz_core::evaluate(h, Complex64::new(lambda, eps))?;
        if n == 1 && r.value[(0, 0)] == Complex64::new(0.0, 0.0) {
            return Err(ClassifyError::ZeroEncountered { lambda });
        }
        let logm = principal_log(&r.value).map_err(|e| match e {
            MatrixKernelError::SpectrumOnCut {
                eigenvalue,
                distance,
            } => ClassifyError::SpectrumOnCut {
                context: format!(
                    "eigenvalue {eigenvalue} within {distance:.3e} of the cut at λ+iε, λ = {lambda}"
                ),
            },
            other => ClassifyError::SingularM {
                context: format!("at λ = {lambda}: {other}"),
            },
        })?;
        samples.push(hermitian_split(&logm).1.into_matrix() * Complex64::new(FRAC_1_PI, 0.0));
    }
    Ok(samples)
}

/// Extrapolated phase matrix `Ξ(λ) = π⁻¹·lim Im ln M(λ+iε)` with full
/// detail. The extrapolant is clamped into `[0, I]`; the distance moved
/// is reported, not hidden.
pub fn xi_matrix_sample(h: &HerglotzFunction, lambda: f64) -> Result<XiSample, ClassifyError> {
    let samples = xi_ladder(h, lambda)?;
    let (limit, err) = boundary::richardson2(&samples);
    if !(err <= tolerances::TOL_BV) {
        return Err(ClassifyError::NoConvergence {
            context: format!("phase ladder at {lambda} stalled at step size {err:.3e}"),
        });
    }
    let raw = hermitian_split(&limit).0;
    let clamp_distance = raw
        .eigenvalues()
        .iter()
        .map(|t| (-t).max(t - 1.0).max(0.0))
        .fold(0.0_f64, f64::max);
    let value =
        HermitianMatrix::symmetrized(&raw.spectral_map(|t| Complex64::new(t.clamp(0.0, 1.0), 0.0)));
    Ok(XiSample {
        lambda,
        value,
        clamp_distance,
        extrapolation_error: err,
    })
}

/// The phase matrix `Ξ(λ)`, clamped into `[0, I]`.
pub fn xi_matrix(h: &HerglotzFunction, lambda: f64) -> Result<HermitianMatrix, ClassifyError> {
    xi_matrix_sample(h, lambda).map(|s| s.value)
}

/// Scalar phase `ξ(λ) = π⁻¹·lim arg m(λ+iε) ∈ [0, 1]`.
pub fn xi_scalar(h: &HerglotzFunction, lambda: f64) -> Result<f64, ClassifyError> {
    if h.dim() != 1 {
        return Err(ClassifyError::BadInput {
            context: format!("scalar phase needs dimension 1, got {}", h.dim()),
        });
    }
    xi_matrix_sample(h, lambda).map(|s| s.value.matrix()[(0, 0)].re)
}

/// Per-point residuals of the reflection duality: the phase of the
/// `M ↦ −M⁻¹` image is the complementary phase, `Ξ_J = I − Ξ`.
#[derive(Debug, Clone)]
pub struct XiDualityReport {
    /// `(λ, ‖Ξ_J(λ) + Ξ(λ) − I‖)` per grid point.
    pub points: Vec<(f64, f64)>,
    pub max_residual: f64,
    pub ok: bool,
}

/// Check `Ξ_J + Ξ = I` over a grid.
pub fn xi_duality_check(
    h: &HerglotzFunction,
    grid: &[f64],
) -> Result<XiDualityReport, ClassifyError> {
    let n = h.dim();
    let image = lft::apply(&SymplecticMatrix::j(n), h)?;
    let mut points = Vec::with_capacity(grid.len());
    let mut max_residual: f64 = 0.0;
    for &lambda in grid {
        let xi = xi_matrix(h, lambda)?;
        let xi_j = xi_matrix(&image, lambda)?;
        let residual =
            (xi.matrix() + xi_j.matrix() - CMatrix::identity(n, n)).norm();
        max_residual = max_residual.max(residual);
        points.push((lambda, residual));
    }
    Ok(XiDualityReport {
        points,
        max_residual,
        ok: max_residual <= tolerances::XI_DUALITY_TOL,
    })
}

/// One row of the characteristic-function cross-tabulation.
#[derive(Debug, Clone)]
pub struct CharacteristicRow {
    pub lambda: f64,
    /// Scalar phase where the ladder succeeded.
    pub xi: Option<f64>,
    /// Whether ξ is within the characteristic tolerance of {0, 1}.
    pub characteristic: Option<bool>,
    pub tag: SpectralTag,
}

/// Pure singularity shows up as a characteristic-function phase: ξ takes
/// only the values 0 and 1 away from a null set. This report samples that
/// statement on a grid and pairs it with the pointwise spectral tags.
#[derive(Debug, Clone)]
pub struct CharacteristicReport {
    pub rows: Vec<CharacteristicRow>,
    /// All sampled phases characteristic?
    pub all_characteristic: bool,
}

/// Sample ξ over a grid and test it against the characteristic pattern.
pub fn singular_iff_characteristic(
    h: &HerglotzFunction,
    grid: &[f64],
) -> Result<CharacteristicReport, ClassifyError> {
    if h.dim() != 1 {
        return Err(ClassifyError::BadInput {
            context: format!("characteristic test needs dimension 1, got {}", h.dim()),
        });
    }
    let mut rows = Vec::with_capacity(grid.len());
    let mut all_characteristic = true;
    for &lambda in grid {
        let tag = classify_point(h, lambda);
        let xi = xi_scalar(h, lambda).ok();
        let characteristic = xi
            .map(|v| v.min(1.0 - v).abs() <= tolerances::XI_CHARACTERISTIC_TOL);
        if let Some(false) = characteristic {
            all_characteristic = false;
        }
        rows.push(CharacteristicRow {
            lambda,
            xi,
            characteristic,
            tag,
        });
    }
    Ok(CharacteristicReport {
        rows,
        all_characteristic,
    })
}

/// How the free constant of a two-spectra reconstruction is pinned down.
#[derive(Debug, Clone)]
pub enum Normalization {
    /// The total mass of the measure of `m` is known.
    TotalMass(f64),
    /// The value `m(z0)` at one point off the real axis is known.
    ValueAt { z0: Complex64, value: Complex64 },
    /// `m` shares the tall-axis asymptotics of a named catalog entry.
    AsymptoticReference {
        name: String,
        params: BTreeMap<String, f64>,
    },
}

/// Interlaced pole/zero data for reconstruction: `poles` is the support
/// of the measure of `m`, `zeros` the support of the transformed
/// function's measure, and they must strictly interlace pole-first:
/// `p₁ < q₁ < p₂ < q₂ < … < p_N < q_N`.
#[derive(Debug, Clone)]
pub struct TwoSpectra {
    poles: Vec<f64>,
    zeros: Vec<f64>,
    normalization: Normalization,
}

impl TwoSpectra {
    pub fn new(
        poles: Vec<f64>,
        zeros: Vec<f64>,
        normalization: Normalization,
    ) -> Result<Self, ClassifyError> {
        if poles.is_empty() || poles.len() != zeros.len() {
            return Err(ClassifyError::InterlacingViolation {
                context: format!(
                    "need equally many poles and zeros, at least one each; got {} and {}",
                    poles.len(),
                    zeros.len()
                ),
            });
        }
        if poles.iter().chain(&zeros).any(|x| !x.is_finite()) {
            return Err(ClassifyError::BadInput {
                context: "poles and zeros must be finite".into(),
            });
        }
        // Strict pole-first interlacing, ties included in the rejection.
        for i in 0..poles.len() {
            let upper_ok = zeros[i] > poles[i];
            let lower_ok = i + 1 >= poles.len() || poles[i + 1] > zeros[i];
            if !(upper_ok && lower_ok) {
                return Err(ClassifyError::InterlacingViolation {
                    context: format!(
                        "expected p{0} < q{0} < p{1}, got pole {2} and zero {3}",
                        i + 1,
                        i + 2,
                        poles[i],
                        zeros[i]
                    ),
                });
            }
        }
        Ok(TwoSpectra {
            poles,
            zeros,
            normalization,
        })
    }

    pub fn poles(&self) -> &[f64] {
        &self.poles
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn normalization(&self) -> &Normalization {
        &self.normalization
    }
}

/// `G(z) = Π (q_j − z)/(p_j − z)`.
fn spectra_ratio(poles: &[f64], zeros: &[f64], z: Complex64) -> Complex64 {
    let mut g = Complex64::new(1.0, 0.0);
    for (&p, &q) in poles.iter().zip(zeros) {
        g *= (Complex64::new(q, 0.0) - z) / (Complex64::new(p, 0.0) - z);
    }
    g
}

/// Rebuild the scalar function behind an interlaced two-spectra data set.
///
/// The ratio `G(z) = Π (q_j − z)/(p_j − z)` is the exponential of the
/// phase integral with `ξ = 1` exactly on the gaps `(p_j, q_j)`, so the
/// sought function is `m = K·G − a11/a12` for one positive constant `K`
/// fixed by the normalization. Partial fractions turn `K·G` into the
/// atomic normal form directly: `m` has an atom of mass `K·R_i` at each
/// pole, with `R_i = Π_j (q_j − p_i) / Π_{j≠i} (p_j − p_i) > 0`.
pub fn borg_reconstruct(
    data: &TwoSpectra,
    a: &SymplecticMatrix,
) -> Result<HerglotzFunction, ClassifyError> {
    if a.n() != 1 {
        return Err(ClassifyError::BadInput {
            context: "reconstruction is scalar: the member must have block size 1".into(),
        });
    }
    let (a11, a12, _, _) = a.blocks();
    let (a11, a12) = (a11[(0, 0)], a12[(0, 0)]);
    if a12.norm() == 0.0 {
        return Err(ClassifyError::BadInput {
            context: "the member must have a nonzero (1,2) entry".into(),
        });
    }
    let shift_c = a11 / a12;
    if shift_c.im.abs() > 1e-12 * (1.0 + shift_c.norm()) {
        return Err(ClassifyError::BadInput {
            context: format!("a11/a12 = {shift_c} must be real for real spectra data"),
        });
    }
    let shift = shift_c.re;
    let poles = &data.poles;
    let zeros = &data.zeros;

    // Partial-fraction residues of G at the poles.
    let mut residues = Vec::with_capacity(poles.len());
    for (i, &p) in poles.iter().enumerate() {
        let mut num = 1.0;
        for &q in zeros {
            num *= q - p;
        }
        let mut den = 1.0;
        for (j, &pj) in poles.iter().enumerate() {
            if j != i {
                den *= pj - p;
            }
        }
        let r = num / den;
        if !(r > 0.0) {
            return Err(ClassifyError::InterlacingViolation {
                context: format!("residue at pole {p} came out {r:.3e}; data cannot interlace"),
            });
        }
        residues.push(r);
    }

    let k = match &data.normalization {
        Normalization::TotalMass(mass) => {
            if !(mass.is_finite() && *mass > 0.0) {
                return Err(ClassifyError::NormalizationInsufficient {
                    context: format!("total mass must be positive and finite, got {mass}"),
                });
            }
            let sum: f64 = residues.iter().sum();
            mass / sum
        }
        Normalization::ValueAt { z0, value } => {
            if z0.im == 0.0 || !(z0.re.is_finite() && z0.im.is_finite()) {
                return Err(ClassifyError::BadInput {
                    context: format!("normalization point {z0} must be finite and off the axis"),
                });
            }
            let g0 = spectra_ratio(poles, zeros, *z0);
            validate_constant((value + shift_c) / g0)?
        }
        Normalization::AsymptoticReference { name, params } => {
            let entry = lookup(name, params).map_err(CoreError::from)?;
            // Match K·G(iη) against the reference on a tall imaginary
            // ladder; G(iη) → 1, so the limit is the reference's own
            // asymptotic constant plus the shift.
            let mut ladder = Vec::new();
            for kk in tolerances::BORG_K_MIN..=tolerances::BORG_K_MAX {
                let z = Complex64::new(0.0, 2.0f64.powi(kk as i32));
                ladder.push((entry.evaluate(z) + shift_c) / spectra_ratio(poles, zeros, z));
            }
            let limit = aitken_limit(&ladder, 2);
            let prev = aitken_limit(&ladder[..ladder.len() - 1], 2);
            if !((limit - prev).norm() <= tolerances::D_CAUCHY * (1.0 + limit.norm())) {
                return Err(ClassifyError::NoConvergence {
                    context: format!(
                        "asymptotic match against `{name}` moved by {:.3e} at the last rung",
                        (limit - prev).norm()
                    ),
                });
            }
            validate_constant(limit)?
        }
    };

    let masses: Vec<f64> = residues.iter().map(|r| k * r).collect();
    // m(z) = (K − shift) + Σ w_i/(p_i − z); regroup into the normal form
    // C + Σ w_i [(p_i−z)⁻¹ − p_i/(1+p_i²)].
    let mut c = k - shift;
    for (&p, &w) in poles.iter().zip(&masses) {
        c += w * p / (1.0 + p * p);
    }
    let atoms = poles
        .iter()
        .zip(&masses)
        .map(|(&p, &w)| Atom::scalar(p, w))
        .collect::<Result<Vec<_>, _>>()?;
    let omega = MatrixMeasure::new(1, atoms, vec![])?;
    let rep = Representation::new(
        HermitianMatrix::scaled_identity(1, c),
        HermitianMatrix::zeros(1),
        omega,
    )?;
    Ok(HerglotzFunction::from_representation(rep))
}

/// The reconstruction constant must be real and positive.
fn validate_constant(k: Complex64) -> Result<f64, ClassifyError> {
    if !(k.re.is_finite() && k.im.is_finite())
        || k.im.abs() > tolerances::NORMALIZATION_TOL * (1.0 + k.norm())
        || k.re <= 0.0
    {
        Err(ClassifyError::NormalizationInsufficient {
            context: format!("reconstruction constant {k} is not a positive real"),
        })
    } else {
        Ok(k.re)
    }
}
