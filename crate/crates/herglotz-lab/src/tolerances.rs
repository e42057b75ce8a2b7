//! Centralized numerical tolerances and ladder parameters.
//!
//! Every threshold that decides a mathematical verdict (PSD, rank,
//! convergence, divergence) lives here with its rationale, so tests and
//! documentation reference one authoritative value instead of scattering
//! magic numbers.

/// Relative Hermiticity tolerance: `‖H − H*‖ ≤ TOL_HERM · (1 + ‖H‖)`.
///
/// Double precision keeps ~1e-16 per operation; 1e-12 leaves headroom for
/// a few thousand accumulated operations while still rejecting genuinely
/// non-Hermitian data.
pub const TOL_HERM: f64 = 1e-12;

/// Default PSD tolerance: smallest eigenvalue ≥ `−PSD_TOL · (1 + ‖H‖)`.
///
/// Sits above accumulated quadrature error (absolute tolerance 1e-10 per
/// piece) so verified imaginary parts of genuinely Herglotz functions never
/// flip the verdict.
pub const PSD_TOL: f64 = 1e-10;

/// Default relative rank cutoff: singular values above
/// `RANK_REL_TOL · σ_max` count toward the numerical rank.
pub const RANK_REL_TOL: f64 = 1e-8;

/// Condition-number limit for the eigenvector matrix in the principal
/// logarithm. Beyond this the matrix is treated as defective (an error),
/// never silently approximated.
pub const EIGVEC_COND_LIMIT: f64 = 1e8;

/// Relative distance from the branch cut (−∞, 0] below which an eigenvalue
/// makes the principal logarithm ill-defined. Chosen far below the smallest
/// boundary-ladder offset (2⁻⁵⁴ ≈ 5.6e-17 is the only smaller scale in the
/// crate) so ladder evaluations near the real axis stay loggable.
pub const LOG_CUT_TOL: f64 = 1e-13;

/// Absolute tolerance of the adaptive Gauss quadrature used for all
/// ac-piece integrals.
pub const QUAD_ABS_TOL: f64 = 1e-10;

/// Boundary ε-ladder exponents: ε = 2^(−k) for k in `BV_K_MIN..=BV_K_MAX`.
pub const BV_K_MIN: u32 = 4;
/// See [`BV_K_MIN`].
pub const BV_K_MAX: u32 = 20;
/// Hard extension limit for the ε-ladder when pole-like growth is being
/// resolved against [`T_DIV`]: 2⁻⁵⁴ is the last step before ε underflows
/// the working precision of λ + iε offsets.
pub const BV_K_EXT_MAX: u32 = 54;

/// Extrapolation-error bound under which a boundary value counts as
/// converged.
pub const TOL_BV: f64 = 1e-6;

/// Magnitude a monotonically growing ε-ladder must cross to be declared
/// Divergent.
///
/// Distinguishes genuine poles from slow logarithmic growth; when growth is
/// pole-like but the ladder's initial range tops out below the threshold,
/// the ladder is extended (up to [`BV_K_EXT_MAX`]) until the threshold
/// decides.
pub const T_DIV: f64 = 1e8;

/// Growth ratio over the last ladder steps that counts as pole-like
/// (1/ε growth doubles per step; 1/√ε grows by √2 ≈ 1.41).
pub const POLE_RATIO: f64 = 1.3;

/// η-ladder exponents for the linear coefficient D: η = 2^k, k in range.
pub const D_K_MIN: u32 = 4;
/// See [`D_K_MIN`].
pub const D_K_MAX: u32 = 24;

/// Cauchy threshold for the accelerated D-ladder.
pub const D_CAUCHY: f64 = 1e-8;

/// Moment-integral truncation ladder: windows [R, R·2^k], k = 1..=20.
pub const MOMENT_K_MAX: u32 = 20;

/// Moment ladder: increment above which the last three steps mean
/// divergence.
pub const MOMENT_DIV_DELTA: f64 = 1e-6;

/// Moment ladder: increment below which the last three steps mean
/// convergence.
pub const MOMENT_CONV_DELTA: f64 = 1e-10;

/// Moment ladder: when increments still sit between the convergence and
/// divergence deltas after the full ladder, a geometric tail is accepted
/// (and summed in closed form) if successive increment ratios stay at or
/// below this bound. A slowly decaying tail with ratio 2^(γ+1) reaches
/// 0.97 only for γ within 0.05 of the integrability border.
pub const MOMENT_RATIO_MAX: f64 = 0.97;

/// Moment ladder: increment ratios at or above this bound (with positive
/// increments) mean the tail is not summable — divergence. Between
/// `MOMENT_RATIO_MAX` and this value the verdict is Inconclusive.
pub const MOMENT_RATIO_DIV_MIN: f64 = 0.99;

/// Moment ladder: maximum allowed spread (max/min) among the trailing
/// increment ratios before the geometric-tail model is distrusted.
pub const MOMENT_RATIO_SPREAD: f64 = 1.3;

/// Endpoint exponents at or below this are not integrated directly even
/// though γ > −1 means integrability; the truncation ladder decides
/// instead. Keeps the algebraic substitution order moderate.
pub const DIRECT_ENDPOINT_GAMMA: f64 = -0.9;

/// Tail exponents at or above this are not integrated directly even
/// though γ < −1 means integrability; the truncation ladder decides
/// instead. With the overflow guard at 1e150 the discarded ultra-tail is
/// below 1e-15 only for exponents at or under −1.1.
pub const DIRECT_TAIL_GAMMA: f64 = -1.1;

/// Cap on the power `m` of the algebraic substitution λ = c ± u^m (and
/// λ = v^{−m} for tails) that smooths endpoint singularities.
pub const SUBSTITUTION_ORDER_CAP: i32 = 30;

/// Integrand evaluations beyond this |λ| return zero: the substitution
/// orders and exponent margins above guarantee the discarded ultra-tail
/// is below 1e-15, while λ² stays clear of f64 overflow.
pub const LAMBDA_OVERFLOW_GUARD: f64 = 1e150;

/// Relative distance below which an atom position and a weight
/// singularity are considered to coincide (an error for moment
/// integrals).
pub const ATOM_SINGULARITY_TOL: f64 = 1e-12;

/// λ-ladder threshold for the limits toward −∞ / 0 in the
/// Friedrichs/Krein detectors: monotone crossing of |T| = 1e6 over the
/// last three steps is conclusive divergence.
pub const T_MONO: f64 = 1e6;

/// λ-ladder exponents for the extension-theory limits: λ = −2^k
/// (Friedrichs direction) or −2^(−k) (Krein direction).
pub const EXT_K_MAX: u32 = 24;

/// Largest |position| kept when an infinite atom family is truncated;
/// the discarded tail is restored by a closed-form correction term.
pub const ATOM_TRUNCATION: f64 = 1e4;

/// Symplectic-membership residual tolerance: ‖A*JA − J‖ ≤ this.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// Relative smallest-singular-value threshold below which the pencil
/// A₁₁ + A₁₂·M counts as singular.
pub const PENCIL_SIGMA_TOL: f64 = 1e-12;

/// Trace mass below which an extrapolated ε·Im M limit counts as "no atom".
pub const POINT_MASS_FLOOR: f64 = 1e-6;

/// Absolute tolerance for the ε·Re M(λ+iε) → 0 sanity probe.
pub const REAL_PART_VANISH_TOL: f64 = 1e-6;

/// Agreement required between a boundary limit and −a₁₁/a₁₂ before the
/// transformed-measure point-mass formula applies.
pub const POINT_MASS_CONDITION_TOL: f64 = 1e-6;

/// Allowed deviation of M(i) from i·I for operations that require the
/// unitary-extension normalization.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// Deviation of Im(P(i)⁻¹) from −I accepted when constructing Krein data.
pub const KREIN_POINT_TOL: f64 = 1e-10;

/// Deviation of `exp(2iα)` from unitarity accepted for an extension
/// parameter (a contractual re-check; the spectral calculus makes it
/// unitary to rounding).
pub const EXT_UNITARY_TOL: f64 = 1e-12;

/// Eigenvalues of a finite boundary imaginary part at or above this count
/// toward the absolutely-continuous rank; smaller ones read as zero
/// (they are below what the ε-extrapolation itself can certify).
pub const AC_IMAG_FLOOR: f64 = 1e-6;

/// Tolerance on ξ/Ξ bound violations (0 ≤ Ξ ≤ I) after extrapolation.
pub const XI_BOUND_TOL: f64 = 1e-6;

/// Acceptance for ‖Ξ_J + Ξ − I‖ in the exponential-representation
/// duality check.
pub const XI_DUALITY_TOL: f64 = 1e-5;

/// An extrapolated ξ value counts as characteristic (0 or 1) within this.
pub const XI_CHARACTERISTIC_TOL: f64 = 1e-3;

/// Imaginary-axis ladder (η = 2ᵏ, k = `BORG_K_MIN..=BORG_K_MAX`) used to
/// match an asymptotic reference when normalizing a two-spectra
/// reconstruction.
pub const BORG_K_MIN: u32 = 6;
pub const BORG_K_MAX: u32 = 16;

/// Distance within which an atom at an integration endpoint triggers the
/// explicit half-weight bookkeeping of the Stieltjes inversion.
pub const ENDPOINT_ATOM_TOL: f64 = 1e-9;

/// Interval-mass ε-ladder levels (ε = 2⁻ᵏ, k = `MASS_K_MIN..=MASS_K_MAX`):
/// shallower than the pointwise ladder because every level pays for a full
/// adaptive quadrature. After the two Richardson eliminations the residual
/// is O(ε³) ≈ 1e-11 at k = 14 — far below the boundary tolerance.
pub const MASS_K_MIN: u32 = 4;
/// See [`MASS_K_MIN`].
pub const MASS_K_MAX: u32 = 14;

/// Each fixed-ε interval integral is pre-split into panels no wider than
/// 4ε, so the quadrature nodes cannot step over a width-ε spike, capped at
/// this many panels. ε-levels that would need more panels are dropped.
pub const MASS_SEGMENT_CAP: usize = 8192;

/// At least this many surviving ε-levels are required for the
/// interval-mass extrapolation.
pub const MASS_MIN_LEVELS: usize = 5;

/// Total-mass η-ladder (η = 2ᵏ, k = 4..24): Cauchy threshold on the
/// accelerated sup sequence η·|m(iη)|.
pub const TOTAL_MASS_CAUCHY: f64 = 1e-8;

/// Total-mass ladder: monotone per-step growth ratio that marks the sup
/// as unbounded (linear growth of |m| doubles the product per step).
pub const TOTAL_MASS_RATIO_DIV: f64 = 1.5;

/// Total-mass ladder: monotone crossing of this level is likewise
/// conclusive unboundedness.
pub const TOTAL_MASS_UNBOUNDED: f64 = 1e6;

/// Numerical slack granted to the normalized-function lower bound
/// min eig(Im z · Im M(z)) ≥ 1/(max(1,|z|²) + |Re z|): a grid point
/// passes when observed − bound ≥ −this.
pub const LOWER_BOUND_SLACK: f64 = 1e-8;

/// Default verification grid for Herglotz-property checks:
/// {x + iy : x ∈ {−2, −1/2, 0, 1/2, 2}, y ∈ {1/8, 1, 8}}.
///
/// Spans positive/negative real parts and three height scales without
/// user input.
pub fn verification_grid() -> Vec<num_complex::Complex64> {
    let xs = [-2.0, -0.5, 0.0, 0.5, 2.0];
    let ys = [0.125, 1.0, 8.0];
    let mut grid = Vec::with_capacity(xs.len() * ys.len());
    for &y in &ys {
        for &x in &xs {
            grid.push(num_complex::Complex64::new(x, y));
        }
    }
    grid
}
