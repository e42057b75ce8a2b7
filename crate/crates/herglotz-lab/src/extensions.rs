//! Self-adjoint extension calculus through boundary functions: rank-one
//! and finite-rank perturbation laws, the two-parameter unitary extension
//! family, Friedrichs/Krein endpoint detection, domain-intersection
//! limits, and the P-function transform between normalized models.
//!
//! Everything acts on a function only through evaluation: perturbation
//! laws are symplectic shears, the extension family is a trigonometric
//! block member, and the endpoint detectors read monotone quadratic-form
//! ladders `(c, M(λ_k)c)` along `λ_k = −2^k` (toward −∞) or `λ_k = −2^{−k}`
//! (up to the origin).

use std::fmt;

use num_complex::Complex64;

use crate::classify::{self, SpectralTag};
use crate::herglotz_core::{self, Body, CoreError, HerglotzFunction};
use crate::ladders::aitken_matrix_limit;
use crate::lft::{self, guarded_inverse, LftError, SymplecticMatrix};
use crate::matrix_kernel::{hermitian_split, CMatrix, HermitianMatrix};
use crate::measures::probe_vectors;
use crate::tolerances;

/// Errors from the extension calculus.
#[derive(Debug, thiserror::Error)]
pub enum ExtensionsError {
    /// The operation requires the model normalization `M(i) = i·I`.
    #[error("function is not normalized: {context}")]
    NotNormalized { context: String },
    /// A P-function value (or the supplied `P(i)`) is numerically singular.
    #[error("singular P value: {context}")]
    SingularP { context: String },
    /// An endpoint ladder ended without a certified verdict.
    #[error("endpoint ladder is inconclusive: {context}")]
    Inconclusive { context: String },
    /// Arguments outside the documented domain of an operation.
    #[error("bad input: {context}")]
    BadInput { context: String },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Lft(#[from] LftError),
}

fn bad_input(context: impl Into<String>) -> ExtensionsError {
    ExtensionsError::BadInput {
        context: context.into(),
    }
}

// ---------------------------------------------------------------------
// Parameter types.
// ---------------------------------------------------------------------

/// A real diagonal coupling `diag(α_1, …, α_n)`: the boundary-condition
/// strengths of a finite-rank perturbation, one per channel.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalCoupling {
    alpha: Vec<f64>,
}

impl DiagonalCoupling {
    pub fn new(alpha: Vec<f64>) -> Result<Self, ExtensionsError> {
        if alpha.is_empty() {
            return Err(bad_input("a diagonal coupling needs at least one entry"));
        }
        if let Some(bad) = alpha.iter().find(|a| !a.is_finite()) {
            return Err(bad_input(format!("coupling entries must be finite, got {bad}")));
        }
        Ok(DiagonalCoupling { alpha })
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.alpha
    }
}

/// A Hermitian angle matrix α parametrizing one member `U = e^{2iα}` of
/// the unitary extension family. The scalar case is the classical
/// boundary-condition angle `α ∈ [0, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionParameter {
    angle: HermitianMatrix,
}

impl ExtensionParameter {
    pub fn new(angle: HermitianMatrix) -> Result<Self, ExtensionsError> {
        if angle.matrix().iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
            return Err(bad_input("extension angle has non-finite entries"));
        }
        let u = angle.spectral_map(|t| Complex64::new(0.0, 2.0 * t).exp());
        let n = angle.dim();
        let dev = (u.adjoint() * &u - CMatrix::identity(n, n)).norm();
        if dev > tolerances::EXT_UNITARY_TOL {
            return Err(bad_input(format!(
                "exp(2iα) deviates from unitarity by {dev:.3e}"
            )));
        }
        Ok(ExtensionParameter { angle })
    }

    /// Scalar angle (dimension 1).
    pub fn scalar(alpha: f64) -> Result<Self, ExtensionsError> {
        if !alpha.is_finite() {
            return Err(bad_input("extension angle must be finite"));
        }
        ExtensionParameter::new(HermitianMatrix::scaled_identity(1, alpha))
    }

    pub fn dim(&self) -> usize {
        self.angle.dim()
    }

    pub fn angle(&self) -> &HermitianMatrix {
        &self.angle
    }

    /// The unitary `e^{2iα}` this angle represents.
    pub fn unitary(&self) -> CMatrix {
        self.angle.spectral_map(|t| Complex64::new(0.0, 2.0 * t).exp())
    }
}

/// Normalized P-function data: the value `P(i)` together with the derived
/// constant `Re(P(i)⁻¹)`. Construction enforces `Im(P(i)⁻¹) = −I`, the
/// normalization under which the associated block transform is symplectic.
#[derive(Debug, Clone)]
pub struct KreinData {
    p_i: CMatrix,
    re_p_inv: HermitianMatrix,
}

impl KreinData {
    pub fn new(p_i: CMatrix) -> Result<Self, ExtensionsError> {
        let n = p_i.nrows();
        if n == 0 || p_i.ncols() != n {
            return Err(bad_input(format!(
                "P(i) must be square and nonempty, got {}×{}",
                p_i.nrows(),
                p_i.ncols()
            )));
        }
        if p_i.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
            return Err(bad_input("P(i) has non-finite entries"));
        }
        let (p_inv, _) = guarded_inverse(&p_i, "P(i)")
            .map_err(|e| ExtensionsError::SingularP { context: e.to_string() })?;
        let (re, im) = hermitian_split(&p_inv);
        let dev = (&im + &HermitianMatrix::identity(n)).norm();
        if dev > tolerances::KREIN_POINT_TOL {
            return Err(ExtensionsError::NotNormalized {
                context: format!("Im(P(i)⁻¹) must equal −I, deviation {dev:.3e}"),
            });
        }
        Ok(KreinData { p_i, re_p_inv: re })
    }

    /// Build from the angle of the represented boundary condition:
    /// `P(i) = (i/2)(I + e^{−2iα})`. Angles with an eigenvalue at
    /// `π/2 (mod π)` make this value singular and are rejected.
    pub fn from_angle(alpha: &HermitianMatrix) -> Result<Self, ExtensionsError> {
        let n = alpha.dim();
        // |P(i)| has eigenvalues |cos t| over the angle eigenvalues t, so a
        // t at π/2 (mod π) is the singular case even though the uniformly
        // tiny matrix it produces would pass a relative rank test.
        if let Some(t) = alpha
            .eigenvalues()
            .iter()
            .find(|t| t.cos().abs() < tolerances::PENCIL_SIGMA_TOL)
        {
            return Err(ExtensionsError::SingularP {
                context: format!("angle eigenvalue {t} sits at π/2 (mod π), P(i) is singular"),
            });
        }
        let u_inv = alpha.spectral_map(|t| Complex64::new(0.0, -2.0 * t).exp());
        let p_i = (CMatrix::identity(n, n) + u_inv) * Complex64::new(0.0, 0.5);
        KreinData::new(p_i)
    }

    pub fn dim(&self) -> usize {
        self.p_i.nrows()
    }

    pub fn p_i(&self) -> &CMatrix {
        &self.p_i
    }

    /// The Hermitian constant `Re(P(i)⁻¹)` (the scalar case is `tan α`).
    pub fn re_p_inv(&self) -> &HermitianMatrix {
        &self.re_p_inv
    }
}

// ---------------------------------------------------------------------
// Perturbation laws.
// ---------------------------------------------------------------------

/// Rank-one perturbation law for scalar functions:
/// `m_β(z) = m_α(z) / (1 + (β−α)·m_α(z))`, realized as the upper shear
/// with block `β−α`. The input should have finite total mass (the setting
/// in which the law describes a rank-one coupling change).
pub fn rank_one_image(
    m_alpha: &HerglotzFunction,
    alpha: f64,
    beta: f64,
) -> Result<HerglotzFunction, ExtensionsError> {
    if m_alpha.dim() != 1 {
        return Err(bad_input(format!(
            "the rank-one law acts on scalar functions, got dimension {}",
            m_alpha.dim()
        )));
    }
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(bad_input("coupling endpoints must be finite"));
    }
    let member = SymplecticMatrix::shear(&HermitianMatrix::scaled_identity(1, beta - alpha));
    Ok(lft::apply(&member, m_alpha)?)
}

/// Finite-rank perturbation law:
/// `M_β(z) = M_α(z)(I + (β−α)M_α(z))⁻¹` with diagonal `β−α`, realized as
/// the upper shear with that diagonal block.
pub fn finite_rank_image(
    m_alpha: &HerglotzFunction,
    alpha: &DiagonalCoupling,
    beta: &DiagonalCoupling,
) -> Result<HerglotzFunction, ExtensionsError> {
    let n = m_alpha.dim();
    if alpha.dim() != n || beta.dim() != n {
        return Err(bad_input(format!(
            "couplings have dimensions {} and {}, function has {n}",
            alpha.dim(),
            beta.dim()
        )));
    }
    let diff: Vec<f64> = beta
        .values()
        .iter()
        .zip(alpha.values())
        .map(|(b, a)| b - a)
        .collect();
    let member = SymplecticMatrix::shear(&HermitianMatrix::from_real_diagonal(&diff));
    Ok(lft::apply(&member, m_alpha)?)
}

// ---------------------------------------------------------------------
// The unitary extension family.
// ---------------------------------------------------------------------

/// The trigonometric block member carrying the α-model to the β-model:
///
/// ```text
/// A11 = A22 = e^{−iβ}(cos β·cos α + sin β·sin α)e^{iα}
/// A12 = −A21 = e^{−iβ}(sin β·cos α − cos β·sin α)e^{iα}
/// ```
///
/// (all matrix functions via the spectral calculus of the Hermitian
/// angles; the factor order matters when the angles do not commute). For
/// scalar angles this is `e^{−i(β−α)}` times the plane rotation by
/// `β−α`, and members compose: `A(β,γ)·A(α,β) = A(α,γ)`.
pub fn extension_family_member(
    a: &ExtensionParameter,
    b: &ExtensionParameter,
) -> Result<SymplecticMatrix, ExtensionsError> {
    if a.dim() != b.dim() {
        return Err(bad_input(format!(
            "extension angles have dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let cos_a = a.angle.spectral_map(|t| Complex64::new(t.cos(), 0.0));
    let sin_a = a.angle.spectral_map(|t| Complex64::new(t.sin(), 0.0));
    let e_ia = a.angle.spectral_map(|t| Complex64::new(0.0, t).exp());
    let cos_b = b.angle.spectral_map(|t| Complex64::new(t.cos(), 0.0));
    let sin_b = b.angle.spectral_map(|t| Complex64::new(t.sin(), 0.0));
    let e_mib = b.angle.spectral_map(|t| Complex64::new(0.0, -t).exp());
    let even = &cos_b * &cos_a + &sin_b * &sin_a;
    let odd = &sin_b * &cos_a - &cos_b * &sin_a;
    let a11 = &e_mib * even * &e_ia;
    let a12 = &e_mib * odd * &e_ia;
    let a21 = -&a12;
    let a22 = a11.clone();
    Ok(SymplecticMatrix::from_blocks(a11, a12, a21, a22)?)
}

/// Require the model normalization `M(i) = i·I` within tolerance.
fn check_normalized(h: &HerglotzFunction, op: &str) -> Result<(), ExtensionsError> {
    let n = h.dim();
    let v = herglotz_core::evaluate(h, Complex64::new(0.0, 1.0))?.value;
    let dev = (v - CMatrix::identity(n, n) * Complex64::new(0.0, 1.0)).norm();
    if dev > tolerances::NORMALIZATION_TOL {
        return Err(ExtensionsError::NotNormalized {
            context: format!("{op} needs M(i) = i·I, deviation {dev:.3e}"),
        });
    }
    Ok(())
}

/// Carry a normalized model (`M(i) = i·I`) from extension parameter `a`
/// to extension parameter `b` via [`extension_family_member`]. The scalar
/// case is `(−sin(β−α) + cos(β−α)·m) / (cos(β−α) + sin(β−α)·m)`.
pub fn extension_image(
    m_alpha: &HerglotzFunction,
    a: &ExtensionParameter,
    b: &ExtensionParameter,
) -> Result<HerglotzFunction, ExtensionsError> {
    if a.dim() != m_alpha.dim() || b.dim() != m_alpha.dim() {
        return Err(bad_input(format!(
            "angles of dimensions {}/{} cannot act on a function of dimension {}",
            a.dim(),
            b.dim(),
            m_alpha.dim()
        )));
    }
    check_normalized(m_alpha, "the extension-family transform")?;
    let member = extension_family_member(a, b)?;
    Ok(lft::apply(&member, m_alpha)?)
}

// ---------------------------------------------------------------------
// Endpoint ladders.
// ---------------------------------------------------------------------

/// Which endpoint of the nonnegative half line a test looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionEnd {
    /// The lower endpoint: ladders run along `λ_k = −2^k ↓ −∞`.
    Friedrichs,
    /// The origin: ladders run along `λ_k = −2^{−k} ↑ 0`.
    Krein,
}

impl fmt::Display for ExtensionEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtensionEnd::Friedrichs => write!(f, "λ → −∞"),
            ExtensionEnd::Krein => write!(f, "λ ↑ 0"),
        }
    }
}

/// Verdict for one monotone quadratic-form ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
enum LadderVerdict {
    DivergesMinus,
    DivergesPlus,
    Converges(f64),
    Undecided,
}

/// Decide the limit of a sampled quadratic-form ladder.
///
/// For a measure on `[0, ∞)` the form `(c, M(λ)c)` is increasing in λ on
/// the negative axis, so the sampled sequence is monotone up to
/// integration noise and the geometric structure of its increments is
/// trustworthy. Rules, in order: a monotone crossing of ±1e6 over the
/// last three steps is conclusive divergence; negligible trailing
/// increments (relative to the value scale) mean convergence; a trailing
/// run of same-sign increments with uniformly geometric decay converges,
/// with the tail summed in closed form; same-sign increments whose ratios
/// never drop below one diverge in the direction of their sign.
fn limit_verdict(values: &[f64]) -> LadderVerdict {
    let n = values.len();
    if n < 4 {
        return LadderVerdict::Undecided;
    }
    let last = values[n - 1];
    let tail4 = &values[n - 4..];
    if last <= -tolerances::T_MONO && tail4.windows(2).all(|w| w[1] <= w[0]) {
        return LadderVerdict::DivergesMinus;
    }
    if last >= tolerances::T_MONO && tail4.windows(2).all(|w| w[1] >= w[0]) {
        return LadderVerdict::DivergesPlus;
    }
    let incs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let scale = values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let tiny = tolerances::MOMENT_CONV_DELTA * (1.0 + scale);
    let last3 = &incs[incs.len() - 3..];
    if last3.iter().all(|d| d.abs() <= tiny) {
        return LadderVerdict::Converges(last);
    }
    let t0 = incs.len().saturating_sub(6);
    let tail = &incs[t0..];
    let all_pos = tail.iter().all(|d| *d > 0.0);
    let all_neg = tail.iter().all(|d| *d < 0.0);
    if all_pos || all_neg {
        let ratios: Vec<f64> = tail.windows(2).map(|w| w[1] / w[0]).collect();
        let rmin = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let rmax = ratios.iter().copied().fold(0.0_f64, f64::max);
        if rmax <= tolerances::MOMENT_RATIO_MAX
            && rmin > 0.0
            && rmax / rmin <= tolerances::MOMENT_RATIO_SPREAD
        {
            let rho = *ratios.last().unwrap();
            let tail_sum = incs.last().unwrap() * rho / (1.0 - rho);
            return LadderVerdict::Converges(last + tail_sum);
        }
        let big = last3.iter().all(|d| d.abs() > tolerances::MOMENT_DIV_DELTA);
        if big && rmin >= tolerances::MOMENT_RATIO_DIV_MIN {
            return if all_pos {
                LadderVerdict::DivergesPlus
            } else {
                LadderVerdict::DivergesMinus
            };
        }
    }
    LadderVerdict::Undecided
}

/// Whether every spectral contribution of `h` sits in `[0, ∞)`. `None`
/// means the body does not expose its measure (transformed functions).
fn body_supported_nonneg(h: &HerglotzFunction) -> Option<bool> {
    match h.body() {
        Body::Representation(rep) => Some(rep.measure().supported_nonneg()),
        Body::Catalog(entry) => entry.truth().ok().map(|t| t.measure.supported_nonneg()),
        Body::Sum(parts) => {
            let mut all_known = true;
            for p in parts {
                match body_supported_nonneg(p) {
                    Some(true) => {}
                    Some(false) => return Some(false),
                    None => all_known = false,
                }
            }
            if all_known {
                Some(true)
            } else {
                None
            }
        }
        Body::Transformed { .. } => None,
    }
}

/// Endpoint tests require the spectrum confined to `[0, ∞)`. Bodies that
/// expose their measure are inspected directly; otherwise a short scan of
/// points below the origin must come back spectrum-free.
fn require_nonneg_support(h: &HerglotzFunction, op: &str) -> Result<(), ExtensionsError> {
    match body_supported_nonneg(h) {
        Some(true) => return Ok(()),
        Some(false) => {
            return Err(bad_input(format!(
                "{op} needs the spectrum confined to [0, ∞), but the measure has weight below 0"
            )))
        }
        None => {}
    }
    for lam in [-1.0e4, -1.0e2, -1.0, -1.0e-2] {
        match classify::classify_point(h, lam) {
            SpectralTag::NoSpectrum => {}
            SpectralTag::Inconclusive => {
                return Err(ExtensionsError::Inconclusive {
                    context: format!("{op}: support scan undecided at λ = {lam}"),
                })
            }
            tag => {
                return Err(bad_input(format!(
                    "{op} needs the spectrum confined to [0, ∞), found {tag} at λ = {lam}"
                )))
            }
        }
    }
    Ok(())
}

/// Hermitian samples `M(λ_k)` along the endpoint ladder.
fn endpoint_ladder(
    h: &HerglotzFunction,
    which: ExtensionEnd,
) -> Result<Vec<CMatrix>, ExtensionsError> {
    let mut out = Vec::with_capacity(tolerances::EXT_K_MAX as usize + 1);
    for k in 0..=tolerances::EXT_K_MAX {
        let lam = match which {
            ExtensionEnd::Friedrichs => -(2.0_f64.powi(k as i32)),
            ExtensionEnd::Krein => -(2.0_f64.powi(-(k as i32))),
        };
        out.push(herglotz_core::evaluate_off_support_real(h, lam)?);
    }
    Ok(out)
}

/// Quadratic-form ladders along every probe direction.
fn probe_ladders(samples: &[CMatrix], n: usize) -> Vec<(String, Vec<f64>)> {
    probe_vectors(n)
        .into_iter()
        .map(|(name, c)| {
            let seq: Vec<f64> = samples
                .iter()
                .map(|m| hermitian_split(m).0.quadratic_form(&c))
                .collect();
            (name, seq)
        })
        .collect()
}

/// Whether `h` models the distinguished lower extension: true iff
/// `(c, M(λ)c) → −∞` as λ ↓ −∞ for every probe direction. Requires the
/// spectrum confined to `[0, ∞)`.
pub fn friedrichs_test(h: &HerglotzFunction) -> Result<bool, ExtensionsError> {
    endpoint_divergence(h, ExtensionEnd::Friedrichs, "the lower-endpoint test")
}

/// Whether `h` models the distinguished soft extension at the origin:
/// true iff `(c, M(λ)c) → +∞` as λ ↑ 0 for every probe direction.
/// Requires the spectrum confined to `[0, ∞)`.
pub fn krein_test(h: &HerglotzFunction) -> Result<bool, ExtensionsError> {
    endpoint_divergence(h, ExtensionEnd::Krein, "the origin-endpoint test")
}

fn endpoint_divergence(
    h: &HerglotzFunction,
    which: ExtensionEnd,
    op: &str,
) -> Result<bool, ExtensionsError> {
    require_nonneg_support(h, op)?;
    let samples = endpoint_ladder(h, which)?;
    let wanted = match which {
        ExtensionEnd::Friedrichs => LadderVerdict::DivergesMinus,
        ExtensionEnd::Krein => LadderVerdict::DivergesPlus,
    };
    let mut pending: Option<String> = None;
    for (name, seq) in probe_ladders(&samples, h.dim()) {
        let verdict = limit_verdict(&seq);
        if verdict == wanted {
            continue;
        }
        match verdict {
            LadderVerdict::Converges(_) => return Ok(false),
            _ => pending.get_or_insert(name),
        };
    }
    match pending {
        None => Ok(true),
        Some(name) => Err(ExtensionsError::Inconclusive {
            context: format!("{op}: ladder along {which} undecided in direction {name}"),
        }),
    }
}

/// Outcome of a domain-intersection test at one endpoint.
#[derive(Debug, Clone)]
pub struct DomainIntersection {
    pub which: ExtensionEnd,
    /// True iff `(c, M(λ)c)` stays bounded (converges) toward the
    /// endpoint for every probe direction — the criterion for the model's
    /// domain to meet the distinguished extension's domain only trivially
    /// failing.
    pub intersects: bool,
    /// The extrapolated endpoint limit of `M(λ)`, present exactly when
    /// every direction converges. Toward −∞ this limit must equal
    /// `−∫dΩ(λ)·λ/(1+λ²)`.
    pub limit: Option<HermitianMatrix>,
}

/// Test whether the endpoint limit of `M(λ)` is finite in every probe
/// direction, reporting the extrapolated limit when it is. Requires the
/// spectrum confined to `[0, ∞)`.
pub fn domain_intersection_test(
    h: &HerglotzFunction,
    which: ExtensionEnd,
) -> Result<DomainIntersection, ExtensionsError> {
    let op = "the domain-intersection test";
    require_nonneg_support(h, op)?;
    let samples = endpoint_ladder(h, which)?;
    let mut pending: Option<String> = None;
    let mut all_finite = true;
    for (name, seq) in probe_ladders(&samples, h.dim()) {
        match limit_verdict(&seq) {
            LadderVerdict::Converges(_) => {}
            LadderVerdict::DivergesMinus | LadderVerdict::DivergesPlus => {
                all_finite = false;
            }
            LadderVerdict::Undecided => {
                pending.get_or_insert(name);
            }
        }
    }
    if !all_finite {
        return Ok(DomainIntersection {
            which,
            intersects: false,
            limit: None,
        });
    }
    if let Some(name) = pending {
        return Err(ExtensionsError::Inconclusive {
            context: format!("{op}: ladder along {which} undecided in direction {name}"),
        });
    }
    let limit = hermitian_split(&aitken_matrix_limit(&samples, 2)).0;
    Ok(DomainIntersection {
        which,
        intersects: true,
        limit: Some(limit),
    })
}

// ---------------------------------------------------------------------
// The P-function transform.
// ---------------------------------------------------------------------

/// The P-function of a normalized model at `z`:
/// `P(z) = (Re(P(i)⁻¹) − M₁(z))⁻¹`.
pub fn krein_p_of_z(
    kd: &KreinData,
    m1: &HerglotzFunction,
    z: Complex64,
) -> Result<CMatrix, ExtensionsError> {
    if kd.dim() != m1.dim() {
        return Err(bad_input(format!(
            "P-data of dimension {} cannot pair with a function of dimension {}",
            kd.dim(),
            m1.dim()
        )));
    }
    let v = herglotz_core::evaluate(m1, z)?.value;
    let q = kd.re_p_inv.matrix() - v;
    let (p, _) = guarded_inverse(&q, "Re(P(i)⁻¹) − M₁(z)")
        .map_err(|e| ExtensionsError::SingularP { context: e.to_string() })?;
    Ok(p)
}

/// Carry the normalized model `M₁` (`M₁(i) = i·I`) to the model of the
/// extension encoded by `kd`:
/// `M₂ = (P + (I + iP)·M₁)·((I + iP) − P·M₁)⁻¹` with `P = P(i)`. The
/// block matrix `[[I+iP, −P], [P, I+iP]]` is symplectic exactly when
/// `Im(P⁻¹) = −I`, which construction of [`KreinData`] guarantees.
pub fn krein_transform(
    m1: &HerglotzFunction,
    kd: &KreinData,
) -> Result<HerglotzFunction, ExtensionsError> {
    let n = kd.dim();
    if m1.dim() != n {
        return Err(bad_input(format!(
            "P-data of dimension {n} cannot transform a function of dimension {}",
            m1.dim()
        )));
    }
    check_normalized(m1, "the P-function transform")?;
    let i = Complex64::new(0.0, 1.0);
    let id_plus_ip = CMatrix::identity(n, n) + kd.p_i() * i;
    let member = SymplecticMatrix::from_blocks(
        id_plus_ip.clone(),
        -kd.p_i(),
        kd.p_i().clone(),
        id_plus_ip,
    )?;
    Ok(lft::apply(&member, m1)?)
}

// ---------------------------------------------------------------------
// The normalized lower bound.
// ---------------------------------------------------------------------

/// One grid point of [`herglotz_lower_bound_check`].
#[derive(Debug, Clone)]
pub struct LowerBoundRow {
    pub z: Complex64,
    /// Smallest eigenvalue of `Im M(z) / Im(z)`.
    pub observed: f64,
    /// `1 / (max(1, |z|²) + |Re z|)`.
    pub bound: f64,
    pub slack: f64,
    pub ok: bool,
}

/// Report of [`herglotz_lower_bound_check`].
#[derive(Debug, Clone)]
pub struct LowerBoundReport {
    pub rows: Vec<LowerBoundRow>,
    pub min_slack: f64,
    pub ok: bool,
}

/// Check the normalized-model lower bound
/// `min eig(Im M(z)/Im(z)) ≥ 1/(max(1,|z|²) + |Re z|)` over a grid. The
/// bound presumes the normalization `∫dΩ(λ)/(1+λ²) = I`: under it the
/// slope `Im M(z)/Im(z) = ∫dΩ(λ)/|λ−z|²` dominates the displayed
/// reciprocal because `|λ−z|² ≤ (1+λ²)(max(1,|z|²)+|Re z|)` pointwise.
/// Unnormalized inputs simply fail rows rather than erroring.
pub fn herglotz_lower_bound_check(
    m: &HerglotzFunction,
    grid: &[Complex64],
) -> Result<LowerBoundReport, ExtensionsError> {
    if grid.is_empty() {
        return Err(bad_input("the lower-bound check needs at least one grid point"));
    }
    let mut rows = Vec::with_capacity(grid.len());
    let mut min_slack = f64::INFINITY;
    let mut all_ok = true;
    for &z in grid {
        let v = herglotz_core::evaluate(m, z)?.value;
        let im = hermitian_split(&v).1;
        let observed = (&im * (1.0 / z.im)).min_eigenvalue();
        let bound = 1.0 / (z.norm_sqr().max(1.0) + z.re.abs());
        let slack = observed - bound;
        let ok = slack >= -tolerances::LOWER_BOUND_SLACK;
        min_slack = min_slack.min(slack);
        all_ok &= ok;
        rows.push(LowerBoundRow {
            z,
            observed,
            bound,
            slack,
            ok,
        });
    }
    Ok(LowerBoundReport {
        rows,
        min_slack,
        ok: all_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{lookup, params};
    use crate::herglotz_core::Representation;
    use crate::measures::{
        AcPiece, Atom, MatrixMeasure, MeasureClassTag, Profile, Support, Weight,
    };
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn catalog_fn(name: &str, p: &[(&str, f64)]) -> HerglotzFunction {
        HerglotzFunction::from_catalog(lookup(name, &params(p)).unwrap())
    }

    fn eval(h: &HerglotzFunction, z: Complex64) -> CMatrix {
        herglotz_core::evaluate(h, z).unwrap().value
    }

    fn eval1(h: &HerglotzFunction, z: Complex64) -> Complex64 {
        eval(h, z)[(0, 0)]
    }

    fn herm2(d0: f64, d1: f64, off_re: f64, off_im: f64) -> HermitianMatrix {
        HermitianMatrix::new(CMatrix::from_row_slice(
            2,
            2,
            &[c(d0, 0.0), c(off_re, -off_im), c(off_re, off_im), c(d1, 0.0)],
        ))
        .unwrap()
    }

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
        let raw = CMatrix::from_fn(n, n, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        HermitianMatrix::symmetrized(&raw)
    }

    /// Pure resolvent-sum model `M(z) = Σ wⱼ/(pⱼ − z)`: the normal form
    /// needs the offset `C = Σ wⱼ·pⱼ/(1+pⱼ²)` to cancel the regularizer.
    fn resolvent_sum(atoms: &[(f64, HermitianMatrix)]) -> HerglotzFunction {
        let n = atoms[0].1.dim();
        let mut shift = HermitianMatrix::zeros(n);
        let mut list = Vec::new();
        for (p, w) in atoms {
            shift = &shift + &(w * (p / (1.0 + p * p)));
            list.push(Atom::new(*p, w.clone()).unwrap());
        }
        let omega = MatrixMeasure::new(n, list, vec![]).unwrap();
        let rep = Representation::new(shift, HermitianMatrix::zeros(n), omega).unwrap();
        HerglotzFunction::from_representation(rep)
    }

    /// Normal form with `C = D = 0` over the given atoms.
    fn centered_sum(atoms: &[(f64, HermitianMatrix)]) -> HerglotzFunction {
        let n = atoms[0].1.dim();
        let list: Vec<Atom> = atoms
            .iter()
            .map(|(p, w)| Atom::new(*p, w.clone()).unwrap())
            .collect();
        let omega = MatrixMeasure::new(n, list, vec![]).unwrap();
        let rep = Representation::new(
            HermitianMatrix::zeros(n),
            HermitianMatrix::zeros(n),
            omega,
        )
        .unwrap();
        HerglotzFunction::from_representation(rep)
    }

    fn scalar_atoms(atoms: &[(f64, f64)]) -> Vec<(f64, HermitianMatrix)> {
        atoms
            .iter()
            .map(|&(p, w)| (p, HermitianMatrix::scaled_identity(1, w)))
            .collect()
    }

    /// Half-line power measure `(2/π)·sin((r+1)π/2)·λ^r dλ` on `(0, ∞)`.
    /// The coefficient makes `∫dμ/(1+λ²) = 1`, so the centered model is
    /// normalized: `M(i) = i` exactly.
    fn power_measure(r: f64) -> MatrixMeasure {
        let coeff = (2.0 / PI) * ((r + 1.0) * FRAC_PI_2).sin();
        let piece = AcPiece::new(
            Support::HalfLineUp { a: 0.0 },
            Profile::Power { exponent: r },
            HermitianMatrix::scaled_identity(1, coeff),
        )
        .unwrap();
        MatrixMeasure::new(1, vec![], vec![piece]).unwrap()
    }

    fn power_model(r: f64) -> HerglotzFunction {
        let rep = Representation::new(
            HermitianMatrix::zeros(1),
            HermitianMatrix::zeros(1),
            power_measure(r),
        )
        .unwrap();
        HerglotzFunction::from_representation(rep)
    }

    /// Non-diagonal normalized 2×2 model: atoms at ±1 with weights
    /// `I ± S`, so the `1/(1+λ²)` moments sum to `I` and `M(i) = i·I`
    /// exactly with `C = D = 0`.
    fn normalized_two_by_two() -> HerglotzFunction {
        let s = herm2(0.2, -0.3, 0.4, 0.1);
        let id = HermitianMatrix::identity(2);
        centered_sum(&[(1.0, &id + &s), (-1.0, &id - &s)])
    }

    #[test]
    fn parameter_and_data_validation() {
        assert!(matches!(
            DiagonalCoupling::new(vec![]),
            Err(ExtensionsError::BadInput { .. })
        ));
        assert!(matches!(
            DiagonalCoupling::new(vec![0.1, f64::NAN]),
            Err(ExtensionsError::BadInput { .. })
        ));
        assert_eq!(DiagonalCoupling::new(vec![0.1, -0.4]).unwrap().dim(), 2);

        assert!(matches!(
            ExtensionParameter::scalar(f64::INFINITY),
            Err(ExtensionsError::BadInput { .. })
        ));
        let p = ExtensionParameter::scalar(0.3).unwrap();
        assert_eq!(p.dim(), 1);
        let u = p.unitary();
        assert!((u[(0, 0)] - c((0.6_f64).cos(), (0.6_f64).sin())).norm() < 1e-14);

        // Scalar angle α: P(i) = i·cos(α)·e^{−iα}, hence Re(P(i)⁻¹) = tan α.
        let kd = KreinData::from_angle(&HermitianMatrix::scaled_identity(1, 0.3)).unwrap();
        assert_abs_diff_eq!(
            kd.re_p_inv().matrix()[(0, 0)].re,
            (0.3_f64).tan(),
            epsilon = 1e-12
        );

        // An angle eigenvalue at π/2 collapses P(i) to zero.
        assert!(matches!(
            KreinData::from_angle(&HermitianMatrix::scaled_identity(1, FRAC_PI_2)),
            Err(ExtensionsError::SingularP { .. })
        ));

        // Im(P(i)⁻¹) = −I fails for P(i) = diag(i, 2i).
        let bad = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 2.0)],
        );
        assert!(matches!(
            KreinData::new(bad),
            Err(ExtensionsError::NotNormalized { .. })
        ));

        // P(i) = i·I passes with Re(P(i)⁻¹) = 0.
        let ok = KreinData::new(CMatrix::identity(2, 2) * c(0.0, 1.0)).unwrap();
        assert!(ok.re_p_inv().norm() < 1e-14);

        // The rank-one law is scalar-only.
        assert!(matches!(
            rank_one_image(&normalized_two_by_two(), 0.0, 1.0),
            Err(ExtensionsError::BadInput { .. })
        ));
    }

    #[test]
    fn rank_one_identity_at_equal_couplings() {
        let m = resolvent_sum(&scalar_atoms(&[(0.0, 0.5), (1.0, 0.5)]));
        let same = rank_one_image(&m, 0.7, 0.7).unwrap();
        for z in tolerances::verification_grid() {
            assert!((eval1(&same, z) - eval1(&m, z)).norm() < 1e-12);
        }
    }

    #[test]
    fn rank_one_law_matches_matrix_resolvent() {
        // Base model: (f, (H−z)⁻¹f) for H = diag(0, 1) against the cyclic
        // vector f = (1/√2, 1/√2) — atoms at 0 and 1 of mass 1/2 each.
        let m0 = resolvent_sum(&scalar_atoms(&[(0.0, 0.5), (1.0, 0.5)]));
        assert!((eval1(&m0, c(0.0, 1.0)) - c(0.25, 0.75)).norm() < 1e-12);

        // Coupling step β−α = 1 adds the rank-one term f·f* to H.
        let m1 = rank_one_image(&m0, 0.0, 1.0).unwrap();
        let half = (0.5_f64).sqrt();
        let f = DVector::from_vec(vec![c(half, 0.0), c(half, 0.0)]);
        let h0 = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        );
        let h1 = &h0 + &f * f.adjoint();
        for z in tolerances::verification_grid() {
            let resolvent = (h1.clone() - CMatrix::identity(2, 2) * z)
                .try_inverse()
                .unwrap();
            let oracle = (f.adjoint() * &resolvent * &f)[(0, 0)];
            assert!(
                (eval1(&m1, z) - oracle).norm() < 1e-10,
                "rank-one law drifts from the resolvent oracle at {z}"
            );
        }
        // Hand-checked anchor: m₁(i) = (7+6i)/17.
        assert!((eval1(&m1, c(0.0, 1.0)) - c(7.0 / 17.0, 6.0 / 17.0)).norm() < 1e-12);
    }

    #[test]
    fn rank_one_steps_compose() {
        let m = resolvent_sum(&scalar_atoms(&[(-1.0, 0.3), (0.5, 0.6), (2.0, 0.4)]));
        let two_steps = rank_one_image(&rank_one_image(&m, 0.0, 0.6).unwrap(), 0.6, 1.3).unwrap();
        let one_step = rank_one_image(&m, 0.0, 1.3).unwrap();
        for z in [c(0.0, 1.0), c(1.0, 0.5), c(-2.0, 0.25), c(0.3, 3.0), c(-0.7, 1.5)] {
            assert!((eval1(&two_steps, z) - eval1(&one_step, z)).norm() < 1e-12);
        }
    }

    #[test]
    fn finite_rank_acts_blockwise_on_decoupled_channels() {
        // Diagonal model: channel 1 has an atom at 0, channel 2 at 1.
        let e11 = HermitianMatrix::new(CMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        ))
        .unwrap();
        let e22 = HermitianMatrix::new(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ))
        .unwrap();
        let m = resolvent_sum(&[(0.0, e11), (1.0, e22)]);
        let base = DiagonalCoupling::new(vec![0.0, 0.0]).unwrap();
        let stepped = DiagonalCoupling::new(vec![1.0, 0.0]).unwrap();
        let image = finite_rank_image(&m, &base, &stepped).unwrap();

        // Unit coupling on channel 1 moves its atom from 0 to 1, so both
        // diagonal entries become 1/(1−z); channels stay decoupled.
        for z in [c(0.0, 1.0), c(0.5, 2.0), c(-1.5, 0.5)] {
            let v = eval(&image, z);
            let expected = c(1.0, 0.0) / (c(1.0, 0.0) - z);
            assert!((v[(0, 0)] - expected).norm() < 1e-12);
            assert!((v[(1, 1)] - expected).norm() < 1e-12);
            assert!(v[(0, 1)].norm() < 1e-12 && v[(1, 0)].norm() < 1e-12);
        }

        // Equal couplings change nothing.
        let same = finite_rank_image(&m, &base, &base).unwrap();
        let z = c(0.3, 0.9);
        assert!((eval(&same, z) - eval(&m, z)).norm() < 1e-12);
    }

    #[test]
    fn finite_rank_law_matches_coupled_resolvent() {
        // Four-level operator, two channels with non-orthogonal complex
        // channel vectors: M(z) = F*(H−z)⁻¹F has atoms wⱼ = vⱼvⱼ* at the
        // levels pⱼ, where vⱼ is the conjugated j-th row of F.
        let p = [-1.5, -0.3, 0.8, 2.2];
        let f = CMatrix::from_row_slice(
            4,
            2,
            &[
                c(0.6, 0.1),
                c(0.2, -0.3),
                c(-0.4, 0.0),
                c(0.5, 0.2),
                c(0.3, -0.2),
                c(-0.1, 0.4),
                c(0.2, 0.5),
                c(0.7, 0.0),
            ],
        );
        let mut atoms = Vec::new();
        for (j, &pj) in p.iter().enumerate() {
            let vj = f.row(j).adjoint();
            atoms.push((pj, HermitianMatrix::new(&vj * vj.adjoint()).unwrap()));
        }
        let m = resolvent_sum(&atoms);

        let h = CMatrix::from_fn(4, 4, |i, j| if i == j { c(p[i], 0.0) } else { c(0.0, 0.0) });
        let z0 = c(0.4, 1.1);
        let r0 = (h.clone() - CMatrix::identity(4, 4) * z0).try_inverse().unwrap();
        assert!(
            ((f.adjoint() * &r0 * &f) - eval(&m, z0)).norm() < 1e-11,
            "base model must equal the uncoupled resolvent compression"
        );

        // Coupling step D = diag(0.8, −0.6) perturbs H by F·D·F*.
        let d = [0.8, -0.6];
        let image = finite_rank_image(
            &m,
            &DiagonalCoupling::new(vec![0.0, 0.0]).unwrap(),
            &DiagonalCoupling::new(d.to_vec()).unwrap(),
        )
        .unwrap();
        let dm = CMatrix::from_fn(2, 2, |i, j| if i == j { c(d[i], 0.0) } else { c(0.0, 0.0) });
        let h_pert = &h + &f * &dm * f.adjoint();
        for z in tolerances::verification_grid() {
            let resolvent = (h_pert.clone() - CMatrix::identity(4, 4) * z)
                .try_inverse()
                .unwrap();
            let oracle = f.adjoint() * &resolvent * &f;
            assert!(
                (eval(&image, z) - oracle).norm() < 1e-10,
                "finite-rank law drifts from the coupled resolvent at {z}"
            );
        }
    }

    #[test]
    fn extension_family_identity_and_quarter_turn() {
        let m = catalog_fn("affine", &[("c", 0.0), ("d", 1.0)]);
        let a = ExtensionParameter::scalar(0.4).unwrap();
        let same = extension_image(&m, &a, &a).unwrap();
        let quarter = extension_image(
            &m,
            &ExtensionParameter::scalar(0.0).unwrap(),
            &ExtensionParameter::scalar(FRAC_PI_2).unwrap(),
        )
        .unwrap();
        let flip = catalog_fn("neg_recip", &[]);
        for z in tolerances::verification_grid() {
            assert!((eval1(&same, z) - z).norm() < 1e-12);
            assert!((eval1(&quarter, z) - eval1(&flip, z)).norm() < 1e-12);
        }
    }

    #[test]
    fn extension_family_scalar_trig_form() {
        let m1 = catalog_fn("kreinB_M1", &[]);
        for (alpha, beta) in [(0.35, 2.1), (1.2, 0.4), (0.0, 2.9)] {
            let image = extension_image(
                &m1,
                &ExtensionParameter::scalar(alpha).unwrap(),
                &ExtensionParameter::scalar(beta).unwrap(),
            )
            .unwrap();
            let (s, co) = (beta - alpha).sin_cos();
            for z in [c(0.0, 1.0), c(0.0, 0.5), c(1.0, 1.0), c(-0.5, 2.0), c(2.0, 0.25)] {
                let v = eval1(&m1, z);
                let expected = (c(-s, 0.0) + c(co, 0.0) * v) / (c(co, 0.0) + c(s, 0.0) * v);
                assert!(
                    (eval1(&image, z) - expected).norm() < 1e-12,
                    "δ = {}, z = {z}",
                    beta - alpha
                );
            }
        }
    }

    #[test]
    fn extension_family_requires_normalization() {
        let unnormalized = catalog_fn("halfline_m", &[("alpha", 0.0)]);
        let a = ExtensionParameter::scalar(0.0).unwrap();
        let b = ExtensionParameter::scalar(1.0).unwrap();
        assert!(matches!(
            extension_image(&unnormalized, &a, &b),
            Err(ExtensionsError::NotNormalized { .. })
        ));
    }

    #[test]
    fn extension_family_members_compose_noncommuting() {
        let a = ExtensionParameter::new(herm2(0.3, -0.1, 0.2, 0.0)).unwrap();
        let b = ExtensionParameter::new(herm2(0.7, 0.2, 0.1, -0.3)).unwrap();
        let g = ExtensionParameter::new(herm2(-0.5, 0.9, 0.25, 0.1)).unwrap();
        let commutator =
            a.angle().matrix() * b.angle().matrix() - b.angle().matrix() * a.angle().matrix();
        assert!(commutator.norm() > 1e-2, "angles must genuinely not commute");

        let ab = extension_family_member(&a, &b).unwrap();
        let bg = extension_family_member(&b, &g).unwrap();
        let ag = extension_family_member(&a, &g).unwrap();
        let composed = bg.multiply(&ab).unwrap();
        assert!((composed.matrix() - ag.matrix()).norm() < 1e-12);

        // Through a normalized model, stepping α→β→γ equals α→γ, and the
        // family fixes the normalization point M(i) = i·I.
        let m = normalized_two_by_two();
        let eye_i = CMatrix::identity(2, 2) * c(0.0, 1.0);
        assert!((eval(&m, c(0.0, 1.0)) - &eye_i).norm() < 1e-12);
        let stepped = extension_image(&extension_image(&m, &a, &b).unwrap(), &b, &g).unwrap();
        let direct = extension_image(&m, &a, &g).unwrap();
        for z in [c(0.0, 2.0), c(1.0, 1.0), c(-0.5, 0.5)] {
            assert!((eval(&stepped, z) - eval(&direct, z)).norm() < 1e-10);
        }
        assert!((eval(&direct, c(0.0, 1.0)) - &eye_i).norm() < 1e-10);
    }

    #[test]
    fn endpoint_divergence_classifies_power_densities() {
        for (r, toward_minus_inf, toward_zero) in
            [(-0.5, false, true), (0.0, true, true), (0.5, true, false)]
        {
            let m = power_model(r);
            assert_eq!(
                friedrichs_test(&m).unwrap(),
                toward_minus_inf,
                "divergence along λ → −∞ for exponent {r}"
            );
            assert_eq!(
                krein_test(&m).unwrap(),
                toward_zero,
                "divergence along λ ↑ 0 for exponent {r}"
            );
        }
    }

    #[test]
    fn endpoint_tests_agree_with_moment_classes() {
        for r in [-0.5, 0.0, 0.5] {
            let measure = power_measure(r);
            let m = power_model(r);
            assert_eq!(
                friedrichs_test(&m).unwrap(),
                measure.class_membership(MeasureClassTag::N0F).unwrap(),
                "ladder and moment tests disagree at the lower end for exponent {r}"
            );
            assert_eq!(
                krein_test(&m).unwrap(),
                measure.class_membership(MeasureClassTag::N0K).unwrap(),
                "ladder and moment tests disagree at the origin for exponent {r}"
            );
        }
    }

    #[test]
    fn endpoint_tests_reject_two_sided_support() {
        let m = normalized_two_by_two(); // atoms at ±1
        assert!(matches!(
            friedrichs_test(&m),
            Err(ExtensionsError::BadInput { .. })
        ));
    }

    #[test]
    fn domain_intersection_limits_and_quadrature() {
        // Exponent −1/2: m(−s) = −1 + √2/√s, so the limit toward −∞ is −1,
        // which must equal −∫dμ·λ/(1+λ²).
        let m = power_model(-0.5);
        let down = domain_intersection_test(&m, ExtensionEnd::Friedrichs).unwrap();
        assert!(down.intersects);
        let limit = down.limit.unwrap().matrix()[(0, 0)].re;
        assert_abs_diff_eq!(limit, -1.0, epsilon = 1e-6);
        let oracle = power_measure(-0.5)
            .moment_integral(&Weight::LambdaOverOnePlusSq, f64::NEG_INFINITY, f64::INFINITY)
            .unwrap()
            .scalar_value()
            .unwrap();
        assert_abs_diff_eq!(limit, -oracle, epsilon = 1e-4);

        // Exponent 1/2: unbounded toward −∞, but finite at the origin with
        // m(0⁻) = 1 (the value of i√(2z)+1 at z = 0).
        let m_up = power_model(0.5);
        let down_up = domain_intersection_test(&m_up, ExtensionEnd::Friedrichs).unwrap();
        assert!(!down_up.intersects && down_up.limit.is_none());
        let at_zero = domain_intersection_test(&m_up, ExtensionEnd::Krein).unwrap();
        assert!(at_zero.intersects);
        assert_abs_diff_eq!(at_zero.limit.unwrap().matrix()[(0, 0)].re, 1.0, epsilon = 1e-6);

        // The logarithmic case diverges at both ends.
        let m_log = power_model(0.0);
        assert!(!domain_intersection_test(&m_log, ExtensionEnd::Friedrichs).unwrap().intersects);
        assert!(!domain_intersection_test(&m_log, ExtensionEnd::Krein).unwrap().intersects);
    }

    #[test]
    fn intersection_limit_gap_equals_reciprocal_moment() {
        // Finite at both ends: the gap between the endpoint limits equals
        // ∫dΩ(λ)/λ.
        let m = centered_sum(&scalar_atoms(&[(1.0, 0.8), (3.0, 0.6)]));
        let down = domain_intersection_test(&m, ExtensionEnd::Friedrichs).unwrap();
        let up = domain_intersection_test(&m, ExtensionEnd::Krein).unwrap();
        assert!(down.intersects && up.intersects);
        let lower = down.limit.unwrap().matrix()[(0, 0)].re;
        let upper = up.limit.unwrap().matrix()[(0, 0)].re;
        assert_abs_diff_eq!(lower, -0.58, epsilon = 1e-8);
        assert_abs_diff_eq!(upper, 0.42, epsilon = 1e-8);

        let measure = MatrixMeasure::new(
            1,
            vec![Atom::scalar(1.0, 0.8).unwrap(), Atom::scalar(3.0, 0.6).unwrap()],
            vec![],
        )
        .unwrap();
        let oracle = measure
            .moment_integral(&Weight::RecipLambda, f64::NEG_INFINITY, f64::INFINITY)
            .unwrap()
            .scalar_value()
            .unwrap();
        assert_abs_diff_eq!(upper - lower, oracle, epsilon = 1e-4);
    }

    #[test]
    fn p_function_closed_form_and_herglotz_sign() {
        let m1 = catalog_fn("kreinB_M1", &[]);

        // Angle 0: P(z) = −(1 + i√(2z))⁻¹; anchor at z = i/2.
        let kd0 = KreinData::from_angle(&HermitianMatrix::scaled_identity(1, 0.0)).unwrap();
        let z = c(0.0, 0.5);
        let root = (z * 2.0).sqrt();
        let expected = -(c(1.0, 0.0) / (c(1.0, 0.0) + c(0.0, 1.0) * root));
        let got = krein_p_of_z(&kd0, &m1, z).unwrap()[(0, 0)];
        assert!((got - expected).norm() < 1e-13);
        assert!((got - c(-0.5, 1.2071067811865475)).norm() < 1e-12);

        // General angle: match the closed-form catalog entry.
        let alpha2 = 0.7;
        let kd7 =
            KreinData::from_angle(&HermitianMatrix::scaled_identity(1, alpha2)).unwrap();
        let p_closed = catalog_fn("kreinB_P", &[("alpha2", alpha2)]);
        for zz in [c(0.0, 1.0), c(1.0, 2.0), c(-0.3, 0.6)] {
            let p = krein_p_of_z(&kd7, &m1, zz).unwrap()[(0, 0)];
            assert!((p - eval1(&p_closed, zz)).norm() < 1e-10);
        }

        // Consistency at the base point and the Herglotz sign upstairs.
        let p_at_i = krein_p_of_z(&kd7, &m1, c(0.0, 1.0)).unwrap();
        assert!((&p_at_i - kd7.p_i()).norm() < 1e-10);
        let inv = c(1.0, 0.0) / p_at_i[(0, 0)];
        assert_abs_diff_eq!(inv.im, -1.0, epsilon = 1e-9);
        for zz in tolerances::verification_grid() {
            let p = krein_p_of_z(&kd7, &m1, zz).unwrap();
            assert!(hermitian_split(&p).1.min_eigenvalue() > 0.0);
        }
    }

    #[test]
    fn p_transform_matches_closed_forms() {
        let m1 = catalog_fn("kreinB_M1", &[]);

        // tan α₂ = 1: the image is (cos + sin·M₁)/(sin − cos·M₁).
        let kd = KreinData::from_angle(&HermitianMatrix::scaled_identity(1, FRAC_PI_4)).unwrap();
        let m2 = krein_transform(&m1, &kd).unwrap();
        let closed = catalog_fn("kreinB_M2", &[("alpha2", FRAC_PI_4)]);
        let (s, co) = FRAC_PI_4.sin_cos();
        for z in tolerances::verification_grid().into_iter().take(10) {
            let v1 = eval1(&m1, z);
            let trig = (c(co, 0.0) + c(s, 0.0) * v1) / (c(s, 0.0) - c(co, 0.0) * v1);
            let got = eval1(&m2, z);
            assert!((got - trig).norm() < 1e-10);
            assert!((got - eval1(&closed, z)).norm() < 1e-10);
        }

        // P(i) = i (trivial boundary unitary): the image is −1/M₁.
        let kd0 = KreinData::new(CMatrix::identity(1, 1) * c(0.0, 1.0)).unwrap();
        let flipped = krein_transform(&m1, &kd0).unwrap();
        for z in tolerances::verification_grid().into_iter().take(10) {
            let expected = -c(1.0, 0.0) / eval1(&m1, z);
            let got = eval1(&flipped, z);
            assert!((got - expected).norm() < 1e-10);
            assert!(got.im > 0.0);
        }

        // The P-data route and the two-angle family route agree: the base
        // model sits at angle π/2 in the family parametrization.
        let alpha2 = 1.0;
        let kd1 = KreinData::from_angle(&HermitianMatrix::scaled_identity(1, alpha2)).unwrap();
        let via_p = krein_transform(&m1, &kd1).unwrap();
        let via_family = extension_image(
            &m1,
            &ExtensionParameter::scalar(FRAC_PI_2).unwrap(),
            &ExtensionParameter::scalar(alpha2).unwrap(),
        )
        .unwrap();
        for z in [c(0.0, 1.0), c(0.5, 0.5), c(-1.0, 2.0), c(2.0, 1.0), c(0.0, 4.0), c(-0.25, 0.3)] {
            assert!((eval1(&via_p, z) - eval1(&via_family, z)).norm() < 1e-10);
        }

        // Unnormalized inputs are rejected up front.
        assert!(matches!(
            krein_transform(&catalog_fn("halfline_m", &[("alpha", 0.0)]), &kd0),
            Err(ExtensionsError::NotNormalized { .. })
        ));
    }

    #[test]
    fn p_transform_preserves_herglotz_for_seeded_data() {
        let m1 = normalized_two_by_two();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..10 {
            // Scaling keeps the angle eigenvalues clear of ±π/2.
            let angle = &random_hermitian(2, &mut rng) * 0.6;
            let kd = KreinData::from_angle(&angle).unwrap();
            let m2 = krein_transform(&m1, &kd).unwrap();
            for z in [c(0.0, 1.0), c(1.0, 0.5), c(-2.0, 2.0)] {
                let im = hermitian_split(&eval(&m2, z)).1;
                assert!(
                    im.min_eigenvalue() > -1e-9,
                    "trial {trial}: image loses the Herglotz property at {z}"
                );
            }
        }
    }

    #[test]
    fn lower_bound_holds_for_normalized_models() {
        let m1 = catalog_fn("kreinB_M1", &[]);
        let grid = [c(0.0, 1.0), c(0.0, 2.0), c(1.0, 1.0), c(-2.0, 0.5), c(0.0, 3.0)];
        let report = herglotz_lower_bound_check(&m1, &grid).unwrap();
        assert!(report.ok, "min slack {}", report.min_slack);
        // At z = i the bound is tight: Im M(i) = 1 against a bound of 1.
        let first = &report.rows[0];
        assert_abs_diff_eq!(first.observed, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(first.bound, 1.0, epsilon = 1e-15);

        // Normalized two-atom model: Im M(2i)/2 = 0.325 over a bound 1/4;
        // the real offset plays no role.
        let atoms = MatrixMeasure::new(
            1,
            vec![Atom::scalar(0.0, 0.5).unwrap(), Atom::scalar(1.0, 1.0).unwrap()],
            vec![],
        )
        .unwrap();
        let rep = Representation::new(
            HermitianMatrix::scaled_identity(1, 0.3),
            HermitianMatrix::zeros(1),
            atoms,
        )
        .unwrap();
        let two_atom = HerglotzFunction::from_representation(rep);
        let at_2i = herglotz_lower_bound_check(&two_atom, &[c(0.0, 2.0)]).unwrap();
        assert!(at_2i.ok);
        assert_abs_diff_eq!(at_2i.rows[0].observed, 0.325, epsilon = 1e-12);
        assert_abs_diff_eq!(at_2i.rows[0].bound, 0.25, epsilon = 1e-15);

        // An unnormalized model is flagged, not silently passed.
        let small = resolvent_sum(&scalar_atoms(&[(0.0, 0.01)]));
        let flagged = herglotz_lower_bound_check(&small, &[c(0.0, 1.0)]).unwrap();
        assert!(!flagged.ok && !flagged.rows[0].ok);
        assert!(flagged.min_slack < -0.9);

        assert!(matches!(
            herglotz_lower_bound_check(&m1, &[]),
            Err(ExtensionsError::BadInput { .. })
        ));
    }

    #[test]
    fn half_power_density_equals_catalog_root_form() {
        // The normalized square-root density reproduces i√(2z)+1, tying the
        // quadrature path to the closed form the other tests lean on.
        let model = power_model(0.5);
        let closed = catalog_fn("kreinB_M1", &[]);
        for z in [c(0.0, 1.0), c(0.0, 2.0), c(1.0, 1.0), c(-1.0, 0.5), c(0.3, 0.1)] {
            assert!(
                (eval1(&model, z) - eval1(&closed, z)).norm() < 1e-8,
                "density model and closed form disagree at {z}"
            );
        }
    }
}
