//! Boundary values on the real axis and Stieltjes inversion: the ε↓0
//! limit machinery that recovers a function's measure from its values
//! just above the axis.
//!
//! Everything here follows one recipe: sample along ε = 2⁻ᵏ, eliminate
//! the O(ε) and O(ε²) error terms of the halving ladder, and accept the
//! extrapolation only when its last step is small. Divergence (a pole on
//! the axis) is recognized by sustained pole-like growth of the samples;
//! anything in between is reported as inconclusive rather than guessed.

use num_complex::Complex64;

use crate::herglotz_core::{evaluate, CoreError, HerglotzFunction};
use crate::ladders::{aitken_limit, eliminate_geometric};
use crate::matrix_kernel::{hermitian_split, CMatrix, HermitianMatrix};
use crate::measures::{IntegralVerdict, ProbeVerdict};
use crate::quad::integrate;
use crate::tolerances;

/// Errors from the boundary-limit machinery.
#[derive(Debug, thiserror::Error)]
pub enum BoundaryError {
    /// Neither the convergence nor the divergence criterion triggered.
    #[error("boundary ladder at {lambda} is inconclusive: {context}")]
    Inconclusive { lambda: f64, context: String },
    /// A finite boundary value was required but the function diverges.
    #[error("boundary value at {lambda} diverges")]
    DivergentBoundary { lambda: f64 },
    /// An extrapolation or quadrature ladder failed its acceptance test.
    #[error("ladder did not converge: {context}")]
    NoConvergence { context: String },
    /// A malformed interval or grid request.
    #[error("bad interval: {context}")]
    BadInterval { context: String },
    /// An operation defined only for scalar functions got a matrix one.
    #[error("operation requires a scalar function, got dimension {dim}")]
    NotScalar { dim: usize },
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// The limit itself: a finite matrix, or the divergence flag.
#[derive(Debug, Clone)]
pub enum BoundaryData {
    Finite(CMatrix),
    Divergent,
}

/// A boundary value M(λ+i0) together with the evidence that produced it:
/// the full ε-ladder and the size of the extrapolation's final step.
#[derive(Debug, Clone)]
pub struct BoundaryValue {
    pub lambda: f64,
    pub value: BoundaryData,
    /// The raw samples (ε, M(λ+iε)), ε descending.
    pub epsilon_ladder: Vec<(f64, CMatrix)>,
    /// Size of the last extrapolation step relative to the limit;
    /// infinite for divergent points.
    pub extrapolation_error: f64,
}

impl BoundaryValue {
    pub fn finite(&self) -> Option<&CMatrix> {
        match &self.value {
            BoundaryData::Finite(m) => Some(m),
            BoundaryData::Divergent => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self.value, BoundaryData::Divergent)
    }
}

/// Boundary data along a grid, ready for CSV export. Tags are the display
/// form of the spectral classification (assigned by the classification
/// layer; this type only carries them).
#[derive(Debug, Clone)]
pub struct BoundaryProfile {
    pub dim: usize,
    pub values: Vec<BoundaryValue>,
    /// Rank of Im M(λ+i0) per point (at divergent points: the rank the
    /// caller attributed, typically from the deepest finite sample).
    pub ranks: Vec<usize>,
    pub tags: Vec<String>,
}

impl BoundaryProfile {
    /// Grid must be strictly increasing and all lists equally long.
    pub fn new(
        dim: usize,
        values: Vec<BoundaryValue>,
        ranks: Vec<usize>,
        tags: Vec<String>,
    ) -> Result<Self, BoundaryError> {
        if values.len() != ranks.len() || values.len() != tags.len() {
            return Err(BoundaryError::BadInterval {
                context: format!(
                    "profile lists disagree: {} values, {} ranks, {} tags",
                    values.len(),
                    ranks.len(),
                    tags.len()
                ),
            });
        }
        if let Some(w) = values.windows(2).find(|w| !(w[0].lambda < w[1].lambda)) {
            return Err(BoundaryError::BadInterval {
                context: format!(
                    "profile grid must be strictly increasing, got {} before {}",
                    w[0].lambda, w[1].lambda
                ),
            });
        }
        if let Some(v) = values
            .iter()
            .filter_map(|v| v.finite())
            .find(|m| m.nrows() != dim)
        {
            return Err(BoundaryError::BadInterval {
                context: format!(
                    "profile dimension {dim} does not match a {}×{} value",
                    v.nrows(),
                    v.ncols()
                ),
            });
        }
        Ok(BoundaryProfile {
            dim,
            values,
            ranks,
            tags,
        })
    }

    pub fn grid(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.lambda).collect()
    }

    /// CSV with columns `lambda`, `re_m_jk`/`im_m_jk` for every entry in
    /// row-major order, `divergent`, `rank`, `tag`. Divergent points
    /// carry `NaN` entries. 17 significant digits, LF line endings.
    pub fn to_csv(&self) -> String {
        let n = self.dim;
        let mut out = String::from("lambda");
        for j in 1..=n {
            for k in 1..=n {
                out.push_str(&format!(",re_m_{j}{k},im_m_{j}{k}"));
            }
        }
        out.push_str(",divergent,rank,tag\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{:.16e}", v.lambda));
            for j in 0..n {
                for k in 0..n {
                    let (re, im) = match &v.value {
                        BoundaryData::Finite(m) => (m[(j, k)].re, m[(j, k)].im),
                        BoundaryData::Divergent => (f64::NAN, f64::NAN),
                    };
                    out.push_str(&format!(",{re:.16e},{im:.16e}"));
                }
            }
            out.push_str(&format!(
                ",{},{},{}\n",
                v.is_divergent(),
                self.ranks[i],
                self.tags[i]
            ));
        }
        out
    }
}

// -----------------------------------------------------------------------
// Ladder plumbing
// -----------------------------------------------------------------------

/// Two-level Richardson on a halving ladder: removes the O(ε) term, then
/// the O(ε²) term, and reports the limit together with the relative size
/// of the extrapolation's last step.
pub(crate) fn richardson2(samples: &[CMatrix]) -> (CMatrix, f64) {
    assert!(samples.len() >= 4, "ladder too short to extrapolate");
    let first = eliminate_geometric(samples, 2.0);
    let second = eliminate_geometric(&first, 4.0);
    let limit = second.last().expect("nonempty").clone();
    let prev = &second[second.len() - 2];
    let err = (&limit - prev).norm() / (1.0 + limit.norm());
    (limit, err)
}

/// Pole-like growth: the last three steps each grew by at least the pole
/// ratio. (A simple pole doubles per step; branch-point growth gives √2;
/// logarithmic growth tends to ratio 1 and is deliberately excluded.)
fn pole_like(norms: &[f64]) -> bool {
    norms.len() >= 4
        && norms[norms.len() - 4..]
            .windows(2)
            .all(|w| w[1] >= tolerances::POLE_RATIO * w[0] && w[1] > 0.0)
}

fn sample_ladder(
    h: &HerglotzFunction,
    lambda: f64,
    k_min: u32,
    k_max: u32,
) -> Result<Vec<(f64, CMatrix)>, CoreError> {
    let mut ladder = Vec::with_capacity((k_max - k_min + 1) as usize);
    for k in k_min..=k_max {
        let eps = (2.0f64).powi(-(k as i32));
        let r = evaluate(h, Complex64::new(lambda, eps))?;
        ladder.push((eps, r.value));
    }
    Ok(ladder)
}

// -----------------------------------------------------------------------
// Operations
// -----------------------------------------------------------------------

/// The normal limit M(λ+i0), extrapolated from the ε-ladder, or the
/// divergence verdict when the samples show sustained pole-like growth
/// past the divergence threshold. When pole-like growth is present but
/// has not yet crossed the threshold at the ladder's standard depth, the
/// ladder is extended until the threshold decides (small atom masses push
/// the crossing to very small ε).
pub fn boundary_limit(
    h: &HerglotzFunction,
    lambda: f64,
) -> Result<BoundaryValue, BoundaryError> {
    if !lambda.is_finite() {
        return Err(BoundaryError::BadInterval {
            context: "boundary point must be finite".into(),
        });
    }
    let mut ladder = sample_ladder(h, lambda, tolerances::BV_K_MIN, tolerances::BV_K_MAX)?;
    let mut norms: Vec<f64> = ladder.iter().map(|(_, m)| m.norm()).collect();

    let crossed =
        |norms: &[f64]| norms.last().copied().unwrap_or(0.0) > tolerances::T_DIV;
    if pole_like(&norms) {
        let mut k = tolerances::BV_K_MAX;
        while !crossed(&norms) && pole_like(&norms) && k < tolerances::BV_K_EXT_MAX {
            k += 1;
            let eps = (2.0f64).powi(-(k as i32));
            let r = evaluate(h, Complex64::new(lambda, eps))?;
            norms.push(r.value.norm());
            ladder.push((eps, r.value));
        }
        if crossed(&norms) && pole_like(&norms) {
            return Ok(BoundaryValue {
                lambda,
                value: BoundaryData::Divergent,
                epsilon_ladder: ladder,
                extrapolation_error: f64::INFINITY,
            });
        }
    }

    let samples: Vec<CMatrix> = ladder.iter().map(|(_, m)| m.clone()).collect();
    let (limit, err) = richardson2(&samples);
    if err <= tolerances::TOL_BV {
        Ok(BoundaryValue {
            lambda,
            value: BoundaryData::Finite(limit),
            epsilon_ladder: ladder,
            extrapolation_error: err,
        })
    } else {
        Err(BoundaryError::Inconclusive {
            lambda,
            context: format!(
                "extrapolation still moving by {err:.3e} (needs ≤ {:.1e}) and growth is not pole-like",
                tolerances::TOL_BV
            ),
        })
    }
}

/// The absolutely continuous density π⁻¹ Im M(λ+i0) at one point.
/// Small negative eigenvalues left by the extrapolation are clamped to
/// zero; a substantially negative one fails the ladder.
pub fn ac_density(h: &HerglotzFunction, lambda: f64) -> Result<HermitianMatrix, BoundaryError> {
    let bv = boundary_limit(h, lambda)?;
    let Some(value) = bv.finite() else {
        return Err(BoundaryError::DivergentBoundary { lambda });
    };
    let imag = hermitian_split(value).1;
    let scaled = HermitianMatrix::symmetrized(
        &(imag.matrix() * Complex64::new(std::f64::consts::FRAC_1_PI, 0.0)),
    );
    clamp_psd(scaled, &format!("density at {lambda}"))
}

/// The point mass Ω({λ}) = lim ε·Im M(λ+iε), extrapolated over the
/// ε-ladder. Zero (up to ladder noise) away from atoms.
pub fn point_mass(h: &HerglotzFunction, lambda: f64) -> Result<HermitianMatrix, BoundaryError> {
    let ladder = sample_ladder(h, lambda, tolerances::BV_K_MIN, tolerances::BV_K_MAX)?;
    let samples: Vec<CMatrix> = ladder
        .iter()
        .map(|(eps, m)| hermitian_split(m).1.into_matrix() * Complex64::new(*eps, 0.0))
        .collect();
    let (limit, err) = richardson2(&samples);
    if err > tolerances::TOL_BV {
        return Err(BoundaryError::NoConvergence {
            context: format!(
                "point-mass ladder at {lambda} still moving by {err:.3e}"
            ),
        });
    }
    clamp_psd(
        HermitianMatrix::symmetrized(&limit),
        &format!("point mass at {lambda}"),
    )
}

fn clamp_psd(h: HermitianMatrix, what: &str) -> Result<HermitianMatrix, BoundaryError> {
    let scale = 1.0 + h.spectral_norm();
    if h.min_eigenvalue() < -100.0 * tolerances::TOL_BV * scale {
        return Err(BoundaryError::NoConvergence {
            context: format!(
                "{what} has eigenvalue {:.3e} < 0 beyond ladder noise",
                h.min_eigenvalue()
            ),
        });
    }
    Ok(HermitianMatrix::symmetrized(
        &h.spectral_map(|t| Complex64::new(t.max(0.0), 0.0)),
    ))
}

/// The mass the measure assigns to an interval with the half-weight
/// endpoint convention:
/// `Ω({l1})/2 + Ω((l1,l2)) + Ω({l2})/2 = π⁻¹ lim ∫_{l1}^{l2} Im M(λ+iε) dλ`.
///
/// Integration runs at each fixed ε (panels pre-split to at most 4ε wide
/// so a width-ε spike cannot slip between quadrature nodes), then the
/// ladder is extrapolated in ε — never the reverse order. Atoms at (or
/// numerically indistinguishable from, within the ladder's ε resolution)
/// an endpoint are probed explicitly, their known smeared profile
/// `π⁻¹·atan((l2−l1)/ε)` is subtracted before extrapolation, and their
/// half weight is added back exactly.
pub fn stieltjes_interval(
    h: &HerglotzFunction,
    l1: f64,
    l2: f64,
) -> Result<HermitianMatrix, BoundaryError> {
    if !(l1.is_finite() && l2.is_finite() && l1 < l2) {
        return Err(BoundaryError::BadInterval {
            context: format!("need finite l1 < l2, got [{l1}, {l2}]"),
        });
    }
    let n = h.dim();
    let length = l2 - l1;

    let m1 = point_mass(h, l1)?;
    let m2 = point_mass(h, l2)?;
    let endpoint_weight = m1.matrix() + m2.matrix();

    let nan_matrix = CMatrix::from_element(n, n, Complex64::new(f64::NAN, 0.0));
    let mut samples = Vec::new();
    for k in tolerances::MASS_K_MIN..=tolerances::MASS_K_MAX {
        let eps = (2.0f64).powi(-(k as i32));
        let segments = (length / (4.0 * eps)).ceil() as usize;
        let segments = segments.max(1);
        if segments > tolerances::MASS_SEGMENT_CAP {
            break;
        }
        let f = |lam: f64| -> CMatrix {
            match evaluate(h, Complex64::new(lam, eps)) {
                Ok(r) => {
                    hermitian_split(&r.value).1.into_matrix()
                        * Complex64::new(std::f64::consts::FRAC_1_PI, 0.0)
                }
                Err(_) => nan_matrix.clone(),
            }
        };
        let mut total = CMatrix::zeros(n, n);
        for s in 0..segments {
            let a = l1 + length * (s as f64) / (segments as f64);
            let b = l1 + length * ((s + 1) as f64) / (segments as f64);
            total += integrate(&f, a, b, tolerances::QUAD_ABS_TOL).map_err(|e| {
                BoundaryError::NoConvergence {
                    context: format!("interval integral at ε = {eps:.3e}: {e}"),
                }
            })?;
        }
        // Remove the endpoint atoms' smeared contribution, which converges
        // only at O(ε) with a slowly-closing arctan profile; they re-enter
        // below with their exact half weight.
        let profile = (length / eps).atan() * std::f64::consts::FRAC_1_PI;
        total -= &endpoint_weight * Complex64::new(profile, 0.0);
        samples.push(total);
    }
    if samples.len() < tolerances::MASS_MIN_LEVELS {
        return Err(BoundaryError::BadInterval {
            context: format!(
                "interval of length {length:.3e} leaves fewer than {} usable ε-levels",
                tolerances::MASS_MIN_LEVELS
            ),
        });
    }
    let (limit, err) = richardson2(&samples);
    if err > tolerances::TOL_BV {
        return Err(BoundaryError::NoConvergence {
            context: format!(
                "interval-mass ladder on [{l1}, {l2}] still moving by {err:.3e}"
            ),
        });
    }
    let mass = limit + endpoint_weight * Complex64::new(0.5, 0.0);
    clamp_psd(
        HermitianMatrix::symmetrized(&mass),
        &format!("interval mass on [{l1}, {l2}]"),
    )
}

/// Total mass of a scalar function's measure via the sup of η·|m(iη)|
/// along η = 2ᵏ: finite exactly when the measure is finite, in which case
/// the sup equals the total mass. Reports a convergent value, an
/// unbounded verdict, or inconclusive — never an error — in the same
/// verdict shape the measure-side moment integrals use.
pub fn total_mass(h: &HerglotzFunction) -> Result<IntegralVerdict, BoundaryError> {
    if h.dim() != 1 {
        return Err(BoundaryError::NotScalar { dim: h.dim() });
    }
    let mut ladder = Vec::new();
    for k in tolerances::D_K_MIN..=tolerances::D_K_MAX {
        let eta = (2.0f64).powi(k as i32);
        let r = evaluate(h, Complex64::new(0.0, eta))?;
        ladder.push(eta * r.value[(0, 0)].norm());
    }
    let last = ladder[ladder.len() - 1];
    let monotone_growth = ladder[ladder.len() - 4..].windows(2).all(|w| w[1] >= w[0]);
    let ratios_diverge = ladder[ladder.len() - 4..]
        .windows(2)
        .all(|w| w[1] >= tolerances::TOTAL_MASS_RATIO_DIV * w[0]);
    let verdict = if monotone_growth && (ratios_diverge || last > tolerances::TOTAL_MASS_UNBOUNDED)
    {
        ProbeVerdict::Divergent
    } else {
        let lim = aitken_limit(&ladder, 2);
        let prev = aitken_limit(&ladder[..ladder.len() - 1], 2);
        if lim.is_finite() && (lim - prev).abs() <= tolerances::TOTAL_MASS_CAUCHY * (1.0 + lim.abs())
        {
            ProbeVerdict::Convergent(lim)
        } else {
            ProbeVerdict::Inconclusive
        }
    };
    let (value, divergent, inconclusive) = match verdict {
        ProbeVerdict::Convergent(v) => (Some(HermitianMatrix::from_real_diagonal(&[v])), false, false),
        ProbeVerdict::Divergent => (None, true, false),
        ProbeVerdict::Inconclusive => (None, false, true),
    };
    Ok(IntegralVerdict {
        value,
        divergent,
        inconclusive,
        probes: vec![("e1".to_string(), verdict)],
        evidence: ladder,
    })
}

/// Sanity probe: ε·Re M(λ+iε) → 0 holds for *every* function of this
/// class at *every* real λ; a violation means the evaluation itself is
/// broken. Returns whether the extrapolated limit vanishes within the
/// documented tolerance.
pub fn real_part_vanishing(h: &HerglotzFunction, lambda: f64) -> Result<bool, BoundaryError> {
    let ladder = sample_ladder(h, lambda, tolerances::BV_K_MIN, tolerances::BV_K_MAX)?;
    let samples: Vec<CMatrix> = ladder
        .iter()
        .map(|(eps, m)| hermitian_split(m).0.into_matrix() * Complex64::new(*eps, 0.0))
        .collect();
    let (limit, _err) = richardson2(&samples);
    Ok(limit.norm() <= tolerances::REAL_PART_VANISH_TOL)
}
