//! Named closed-form Herglotz functions with exact reference data.
//!
//! Every entry carries an independent evaluator (series, special function,
//! or elementary closed form) and, where known exactly, the matching
//! representation data: the real constant `C`, the slope `D`, the spectral
//! measure, and — for entries whose measure is an infinite atom family —
//! an analytic correction for the atoms discarded by truncation.
//!
//! The evaluators are the ground truth the numerical machinery is tested
//! against, so none of them go through the representation integrals.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use num_complex::Complex64;
use thiserror::Error;

use crate::measures::{Atom, AcPiece, MatrixMeasure, Profile, Support};
use crate::tolerances::ATOM_TRUNCATION;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{name}`")]
    UnknownName { name: String },
    #[error("bad parameters for `{name}`: {reason}")]
    BadParams { name: String, reason: String },
    #[error("`{name}` has no exact reference data")]
    NoTruthData { name: String },
}

fn bad(name: &str, reason: impl Into<String>) -> CatalogError {
    CatalogError::BadParams {
        name: name.to_string(),
        reason: reason.into(),
    }
}

/// Analytic value of the atom-family tail dropped by truncation.
///
/// The truncated families keep atoms with |position| ≤ `ATOM_TRUNCATION`;
/// the remainder is summed by an Euler–Maclaurin expansion (integral plus
/// `f/2 − f′/12` endpoint terms), accurate to better than 1e-12 for
/// |z| ≤ 100.
#[derive(Debug, Clone, PartialEq)]
pub enum TailCorrection {
    None,
    /// Σ over n ≥ `first` of the *paired* kernel
    /// `2z/(u² − z²)` with `u = spacing·(n + offset)`, i.e. unit atoms at
    /// ±u merged symmetrically.
    PairedPoles { spacing: f64, offset: f64, first: f64 },
    /// Σ over n ≥ `first` of `(−n − z)⁻¹ + n/(1 + n²)`, i.e. unit atoms
    /// at the negative integers −n with the standard kernel regularization.
    NegativeIntegerPoles { first: f64 },
}

impl TailCorrection {
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        match *self {
            TailCorrection::None => Complex64::new(0.0, 0.0),
            TailCorrection::PairedPoles {
                spacing,
                offset,
                first,
            } => {
                let u0 = spacing * (first + offset);
                let u = Complex64::new(u0, 0.0);
                // ∫_first^∞ 2z/(u(t)²−z²) dt; the ratio stays in one
                // half-plane for z off the real axis, so the principal
                // log is continuous along the contour.
                let integral = -((u - z) / (u + z)).ln() / spacing;
                let den = u0 * u0 - z * z;
                let f0 = 2.0 * z / den;
                let fp0 = -4.0 * spacing * u0 * z / (den * den);
                integral + 0.5 * f0 - fp0 / 12.0
            }
            TailCorrection::NegativeIntegerPoles { first } => {
                let n = first;
                let nz = z + n;
                let integral = nz.ln() - 0.5 * (1.0 + n * n).ln();
                let g0 = -nz.finv() + n / (1.0 + n * n);
                let gp0 = (nz * nz).finv() + (1.0 - n * n) / ((1.0 + n * n) * (1.0 + n * n));
                integral + 0.5 * g0 - gp0 / 12.0
            }
        }
    }
}

/// Exact representation data for a catalog entry:
/// `M(z) = C + D·z + ∫dΩ(λ)((λ−z)⁻¹ − λ(1+λ²)⁻¹) + tail(z)`.
#[derive(Debug, Clone)]
pub struct CatalogTruth {
    pub c: f64,
    pub d: f64,
    pub measure: MatrixMeasure,
    pub tail: TailCorrection,
    /// Documented bound on the tail-formula error for |z| ≤ 100
    /// (0.0 when the data is exact).
    pub tail_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Form {
    ConstImag { c: f64, d: f64 },
    Affine { c: f64, d: f64 },
    NegRecip,
    Log,
    LogNegRecip,
    Power { r: f64 },
    NegPower { r: f64 },
    Tan,
    NegCot,
    Digamma,
    MobiusAtom { l1: f64, l2: f64 },
    MobiusLog { l1: f64, l2: f64 },
    /// Robin boundary-condition family on the half line; `alpha = 0` is
    /// the Dirichlet member `i√z`.
    HalflineM { alpha: f64 },
    KreinM1,
    KreinM2 { alpha2: f64 },
    KreinP { alpha2: f64 },
}

/// A named scalar Herglotz function.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    name: String,
    display: String,
    form: Form,
    notes: &'static str,
}

impl CatalogEntry {
    /// Canonical entry name (the lookup key).
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Name with bound parameters, e.g. `power_r(r=0.5)`.
    pub fn display(&self) -> &str {
        &self.display
    }

    /// Branch conventions and truncation caveats.
    pub fn notes(&self) -> &'static str {
        self.notes
    }

    /// All catalog entries are scalar.
    pub fn dim(&self) -> usize {
        1
    }

    /// Closed-form value at `z`, defined for `z` off the real axis and on
    /// the real axis away from the entry's singular support. The lower
    /// half plane is the reflection `M(z̄) = conj M(z)` of the upper.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        if z.im < 0.0 {
            return self.eval_upper(z.conj()).conj();
        }
        // Normalize −0.0 so real points take the upper boundary branch.
        let z = if z.im == 0.0 {
            Complex64::new(z.re, 0.0)
        } else {
            z
        };
        self.eval_upper(z)
    }

    /// Whether `truth()` succeeds.
    pub fn has_truth(&self) -> bool {
        !matches!(self.form, Form::KreinM2 { .. } | Form::KreinP { .. })
    }

    fn eval_upper(&self, z: Complex64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        match self.form {
            Form::ConstImag { c, d } => Complex64::new(c, d),
            Form::Affine { c, d } => c + d * z,
            Form::NegRecip => -z.finv(),
            Form::Log => z.ln(),
            // ln(−1/z) = −ln z + iπ on the closed upper half plane.
            Form::LogNegRecip => -z.ln() + Complex64::new(0.0, PI),
            Form::Power { r } => z.powf(r),
            Form::NegPower { r } => -z.powf(-r),
            Form::Tan => tan_upper(z),
            Form::NegCot => neg_cot_upper(z),
            Form::Digamma => digamma(z),
            Form::MobiusAtom { l1, l2 } => (z - l2) / (z - l1),
            // The ratio lies in the closed upper half plane whenever z
            // does, so the principal log gives the right boundary branch.
            Form::MobiusLog { l1, l2 } => ((z - l2) / (z - l1)).ln(),
            Form::HalflineM { alpha } => {
                let w = i * sqrt_positive_cut(z);
                let (s, c) = alpha.sin_cos();
                (c * w - s) / (s * w + c)
            }
            Form::KreinM1 => i * sqrt_positive_cut(2.0 * z) + 1.0,
            Form::KreinM2 { alpha2 } => {
                let m1 = i * sqrt_positive_cut(2.0 * z) + 1.0;
                let (s, c) = alpha2.sin_cos();
                (c + s * m1) / (s - c * m1)
            }
            Form::KreinP { alpha2 } => {
                -(1.0 - alpha2.tan() + i * sqrt_positive_cut(2.0 * z)).finv()
            }
        }
    }

    /// Exact representation data, when the entry has any.
    pub fn truth(&self) -> Result<CatalogTruth, CatalogError> {
        let exact = |c: f64, d: f64, measure: MatrixMeasure| CatalogTruth {
            c,
            d,
            measure,
            tail: TailCorrection::None,
            tail_error: 0.0,
        };
        let scalar_coeff = |w: f64| crate::HermitianMatrix::from_real_diagonal(&[w]);
        let built = |r: Result<MatrixMeasure, crate::measures::MeasureError>| {
            r.expect("catalog truth measures are well formed by construction")
        };
        match self.form {
            Form::ConstImag { c, d } => {
                let mut pieces = Vec::new();
                if d > 0.0 {
                    let profile = Profile::Power { exponent: 0.0 };
                    pieces.push(
                        AcPiece::new(Support::HalfLineDown { b: 0.0 }, profile.clone(), scalar_coeff(d / PI))
                            .expect("flat density piece"),
                    );
                    pieces.push(
                        AcPiece::new(Support::HalfLineUp { a: 0.0 }, profile, scalar_coeff(d / PI))
                            .expect("flat density piece"),
                    );
                }
                Ok(exact(c, 0.0, built(MatrixMeasure::new(1, vec![], pieces))))
            }
            Form::Affine { c, d } => Ok(exact(c, d, MatrixMeasure::zero(1))),
            Form::NegRecip => {
                let atom = Atom::scalar(0.0, 1.0).expect("unit atom");
                Ok(exact(0.0, 0.0, built(MatrixMeasure::new(1, vec![atom], vec![]))))
            }
            Form::Log => {
                let piece = AcPiece::new(
                    Support::HalfLineDown { b: 0.0 },
                    Profile::Power { exponent: 0.0 },
                    scalar_coeff(1.0),
                )
                .expect("flat density piece");
                Ok(exact(0.0, 0.0, built(MatrixMeasure::new(1, vec![], vec![piece]))))
            }
            Form::LogNegRecip => {
                let piece = AcPiece::new(
                    Support::HalfLineUp { a: 0.0 },
                    Profile::Power { exponent: 0.0 },
                    scalar_coeff(1.0),
                )
                .expect("flat density piece");
                Ok(exact(0.0, 0.0, built(MatrixMeasure::new(1, vec![], vec![piece]))))
            }
            Form::Power { r } => {
                let piece = AcPiece::new(
                    Support::HalfLineDown { b: 0.0 },
                    Profile::Power { exponent: r },
                    scalar_coeff((r * PI).sin() / PI),
                )
                .expect("power density piece");
                Ok(exact(
                    (r * FRAC_PI_2).cos(),
                    0.0,
                    built(MatrixMeasure::new(1, vec![], vec![piece])),
                ))
            }
            Form::NegPower { r } => {
                let piece = AcPiece::new(
                    Support::HalfLineDown { b: 0.0 },
                    Profile::Power { exponent: -r },
                    scalar_coeff((r * PI).sin() / PI),
                )
                .expect("power density piece");
                Ok(exact(
                    -(r * FRAC_PI_2).cos(),
                    0.0,
                    built(MatrixMeasure::new(1, vec![], vec![piece])),
                ))
            }
            Form::Tan => {
                let nmax = (ATOM_TRUNCATION / PI - 0.5).floor() as i64;
                let atoms = (-(nmax + 1)..=nmax)
                    .map(|n| Atom::scalar((n as f64 + 0.5) * PI, 1.0).expect("unit atom"))
                    .collect();
                Ok(CatalogTruth {
                    c: 0.0,
                    d: 0.0,
                    measure: built(MatrixMeasure::new(1, atoms, vec![])),
                    tail: TailCorrection::PairedPoles {
                        spacing: PI,
                        offset: 0.5,
                        first: (nmax + 1) as f64,
                    },
                    tail_error: 1e-12,
                })
            }
            Form::NegCot => {
                let nmax = (ATOM_TRUNCATION / PI).floor() as i64;
                let atoms = (-nmax..=nmax)
                    .map(|n| Atom::scalar(n as f64 * PI, 1.0).expect("unit atom"))
                    .collect();
                Ok(CatalogTruth {
                    c: 0.0,
                    d: 0.0,
                    measure: built(MatrixMeasure::new(1, atoms, vec![])),
                    tail: TailCorrection::PairedPoles {
                        spacing: PI,
                        offset: 0.0,
                        first: (nmax + 1) as f64,
                    },
                    tail_error: 1e-12,
                })
            }
            Form::Digamma => {
                let nmax = ATOM_TRUNCATION as i64;
                let atoms = (0..=nmax)
                    .rev()
                    .map(|n| Atom::scalar(-(n as f64), 1.0).expect("unit atom"))
                    .collect();
                Ok(CatalogTruth {
                    c: DIGAMMA_REAL_PART_AT_I,
                    d: 0.0,
                    measure: built(MatrixMeasure::new(1, atoms, vec![])),
                    tail: TailCorrection::NegativeIntegerPoles {
                        first: (nmax + 1) as f64,
                    },
                    tail_error: 1e-12,
                })
            }
            Form::MobiusAtom { l1, l2 } => {
                let atom = Atom::scalar(l1, l2 - l1).expect("gap atom");
                Ok(exact(
                    1.0 + (l2 - l1) * l1 / (1.0 + l1 * l1),
                    0.0,
                    built(MatrixMeasure::new(1, vec![atom], vec![])),
                ))
            }
            Form::MobiusLog { l1, l2 } => {
                let piece = AcPiece::new(
                    Support::Interval { a: l1, b: l2 },
                    Profile::Power { exponent: 0.0 },
                    scalar_coeff(1.0),
                )
                .expect("flat density piece");
                Ok(exact(
                    0.5 * ((1.0 + l2 * l2) / (1.0 + l1 * l1)).ln(),
                    0.0,
                    built(MatrixMeasure::new(1, vec![], vec![piece])),
                ))
            }
            Form::HalflineM { alpha } => {
                if alpha == 0.0 {
                    let piece = AcPiece::new(
                        Support::HalfLineUp { a: 0.0 },
                        Profile::Power { exponent: 0.5 },
                        scalar_coeff(1.0 / PI),
                    )
                    .expect("square-root density piece");
                    return Ok(exact(
                        -FRAC_1_SQRT_2,
                        0.0,
                        built(MatrixMeasure::new(1, vec![], vec![piece])),
                    ));
                }
                let mut atoms = Vec::new();
                if alpha < FRAC_PI_2 {
                    let cot = alpha.cos() / alpha.sin();
                    let mass = 2.0 * alpha.cos() / alpha.sin().powi(3);
                    atoms.push(Atom::scalar(-cot * cot, mass).expect("boundary atom"));
                }
                let piece = AcPiece::new(
                    Support::HalfLineUp { a: 0.0 },
                    Profile::Robin { alpha },
                    scalar_coeff(1.0 / PI),
                )
                .expect("robin density piece");
                // The regularized constant equals Re M(i) identically
                // (the kernel at z = i is purely imaginary), which for
                // this family has no elementary closed form; the closed
                // form of M itself supplies it exactly.
                let c = self.eval_upper(Complex64::new(0.0, 1.0)).re;
                Ok(exact(c, 0.0, built(MatrixMeasure::new(1, atoms, vec![piece]))))
            }
            Form::KreinM1 => {
                let piece = AcPiece::new(
                    Support::HalfLineUp { a: 0.0 },
                    Profile::Power { exponent: 0.5 },
                    scalar_coeff(2.0_f64.sqrt() / PI),
                )
                .expect("square-root density piece");
                Ok(exact(0.0, 0.0, built(MatrixMeasure::new(1, vec![], vec![piece]))))
            }
            Form::KreinM2 { .. } | Form::KreinP { .. } => Err(CatalogError::NoTruthData {
                name: self.name.clone(),
            }),
        }
    }
}

/// Square root with the branch cut along `[0, ∞)`: `Im √z > 0` for every
/// `z` off the cut. On the cut (approached from above) it is the ordinary
/// nonnegative root.
fn sqrt_positive_cut(z: Complex64) -> Complex64 {
    let w = z.sqrt();
    if w.im < 0.0 {
        -w
    } else {
        w
    }
}

/// tan via `−i(q−1)/(q+1)`, `q = e^{2iz}`: `|q| ≤ 1` on the closed upper
/// half plane, so nothing overflows however large `Im z` gets.
fn tan_upper(z: Complex64) -> Complex64 {
    let q = (Complex64::new(0.0, 2.0) * z).exp();
    let i = Complex64::new(0.0, 1.0);
    -i * (q - 1.0) / (q + 1.0)
}

/// −cot via `−i(q+1)/(q−1)`, same stabilization as [`tan_upper`].
fn neg_cot_upper(z: Complex64) -> Complex64 {
    let q = (Complex64::new(0.0, 2.0) * z).exp();
    let i = Complex64::new(0.0, 1.0);
    -i * (q + 1.0) / (q - 1.0)
}

/// Real part of the digamma function at `z = i`; equals
/// `−γ + Σ_{n≥0} ((n+1)⁻¹ − n(1+n²)⁻¹)`.
pub const DIGAMMA_REAL_PART_AT_I: f64 = 0.094650320622476977271878482721907;

/// Digamma (logarithmic derivative of the gamma function) for complex
/// arguments: forward recurrence into `Re w ≥ 18`, then the asymptotic
/// series through `w⁻¹⁴`. Accurate to better than 1e-12 for |z| ≤ 100;
/// poles at the nonpositive integers surface as infinities.
pub fn digamma(z: Complex64) -> Complex64 {
    let mut w = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while w.re < 18.0 {
        acc -= w.finv();
        w += 1.0;
    }
    let p = (w * w).finv();
    // ψ(w) ~ ln w − 1/(2w) − Σ_k coef[k]·w^{−2(k+1)}
    const COEF: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let mut tail = Complex64::new(0.0, 0.0);
    for &c in COEF.iter().rev() {
        tail = (tail + c) * p;
    }
    w.ln() - 0.5 * w.finv() - tail + acc
}

/// Convenience constructor for parameter maps.
pub fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn reject_unknown_keys(
    name: &str,
    given: &BTreeMap<String, f64>,
    allowed: &[&str],
) -> Result<(), CatalogError> {
    for key in given.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(bad(
                name,
                format!("unexpected parameter `{key}` (allowed: {allowed:?})"),
            ));
        }
    }
    Ok(())
}

fn required(name: &str, given: &BTreeMap<String, f64>, key: &str) -> Result<f64, CatalogError> {
    let v = *given
        .get(key)
        .ok_or_else(|| bad(name, format!("missing parameter `{key}`")))?;
    if !v.is_finite() {
        return Err(bad(name, format!("parameter `{key}` must be finite")));
    }
    Ok(v)
}

fn optional(
    name: &str,
    given: &BTreeMap<String, f64>,
    key: &str,
    default: f64,
) -> Result<f64, CatalogError> {
    match given.get(key) {
        None => Ok(default),
        Some(v) if v.is_finite() => Ok(*v),
        Some(_) => Err(bad(name, format!("parameter `{key}` must be finite"))),
    }
}

/// Resolve a catalog name plus parameters to an entry.
pub fn lookup(name: &str, given: &BTreeMap<String, f64>) -> Result<CatalogEntry, CatalogError> {
    let no_params = |form: Form, notes: &'static str| -> Result<CatalogEntry, CatalogError> {
        reject_unknown_keys(name, given, &[])?;
        Ok(CatalogEntry {
            name: name.to_string(),
            display: name.to_string(),
            form,
            notes,
        })
    };
    let with_display = |form: Form, display: String, notes: &'static str| CatalogEntry {
        name: name.to_string(),
        display,
        form,
        notes,
    };
    match name {
        "const_imag" | "affine" => {
            reject_unknown_keys(name, given, &["c", "d"])?;
            let c = optional(name, given, "c", 0.0)?;
            let d = optional(name, given, "d", 1.0)?;
            if d < 0.0 {
                return Err(bad(name, "parameter `d` must be nonnegative"));
            }
            let form = if name == "affine" {
                Form::Affine { c, d }
            } else {
                Form::ConstImag { c, d }
            };
            Ok(with_display(
                form,
                format!("{name}(c={c}, d={d})"),
                if name == "affine" {
                    "entire; slope d is the linear-term coefficient"
                } else {
                    "constant; flat density d/pi over the whole line"
                },
            ))
        }
        "neg_recip" => no_params(Form::NegRecip, "pole at 0; unit atom there"),
        "log" => no_params(
            Form::Log,
            "principal branch, cut along (-inf, 0]; density 1 on the cut",
        ),
        "log_neg_recip" => no_params(
            Form::LogNegRecip,
            "principal branch composed with -1/z; density 1 on (0, inf)",
        ),
        "power_r" | "neg_power_r" => {
            reject_unknown_keys(name, given, &["r"])?;
            let r = required(name, given, "r")?;
            if !(0.0 < r && r < 1.0) {
                return Err(bad(name, format!("parameter `r` must lie in (0, 1), got {r}")));
            }
            let form = if name == "power_r" {
                Form::Power { r }
            } else {
                Form::NegPower { r }
            };
            Ok(with_display(
                form,
                format!("{name}(r={r})"),
                "principal power branch, cut along (-inf, 0]",
            ))
        }
        "tan" => no_params(
            Form::Tan,
            "unit atoms at half-integer multiples of pi; truncated at 1e4 \
             with analytic tail (error < 1e-12 for |z| <= 100)",
        ),
        "neg_cot" => no_params(
            Form::NegCot,
            "unit atoms at integer multiples of pi; truncated at 1e4 \
             with analytic tail (error < 1e-12 for |z| <= 100)",
        ),
        "digamma" => no_params(
            Form::Digamma,
            "recurrence + asymptotic series, 1e-12 for |z| <= 100; unit \
             atoms at -n truncated at 1e4 with analytic tail",
        ),
        "mobius_atom" | "mobius_log" => {
            reject_unknown_keys(name, given, &["lambda1", "lambda2"])?;
            let l1 = required(name, given, "lambda1")?;
            let l2 = required(name, given, "lambda2")?;
            if !(l1 < l2) {
                return Err(bad(name, format!("need lambda1 < lambda2, got {l1} and {l2}")));
            }
            let form = if name == "mobius_atom" {
                Form::MobiusAtom { l1, l2 }
            } else {
                Form::MobiusLog { l1, l2 }
            };
            Ok(with_display(
                form,
                format!("{name}(lambda1={l1}, lambda2={l2})"),
                if name == "mobius_atom" {
                    "rational with one pole; atom at lambda1 of mass lambda2-lambda1"
                } else {
                    "log of the pole ratio; density 1 on (lambda1, lambda2)"
                },
            ))
        }
        "halfline_m" => {
            reject_unknown_keys(name, given, &["alpha"])?;
            let alpha = required(name, given, "alpha")?;
            if !(0.0..PI).contains(&alpha) {
                return Err(bad(name, format!("parameter `alpha` must lie in [0, pi), got {alpha}")));
            }
            Ok(with_display(
                Form::HalflineM { alpha },
                format!("halfline_m(alpha={alpha})"),
                "sqrt branch with Im sqrt(z) > 0 off [0, inf); negative atom \
                 present only for alpha in (0, pi/2)",
            ))
        }
        "halfline_dirichlet" => no_params(
            Form::HalflineM { alpha: 0.0 },
            "i sqrt(z) with Im sqrt(z) > 0 off [0, inf)",
        ),
        "kreinB_M1" => no_params(
            Form::KreinM1,
            "i sqrt(2z) + 1; sqrt branch with Im sqrt > 0 off [0, inf)",
        ),
        "kreinB_M2" | "kreinB_P" => {
            reject_unknown_keys(name, given, &["alpha2"])?;
            let alpha2 = required(name, given, "alpha2")?;
            if !(0.0..PI).contains(&alpha2) {
                return Err(bad(name, format!("parameter `alpha2` must lie in [0, pi), got {alpha2}")));
            }
            if name == "kreinB_P" && (alpha2 - FRAC_PI_2).abs() < 1e-12 {
                return Err(bad(name, "alpha2 = pi/2 puts a pole in tan(alpha2)"));
            }
            let form = if name == "kreinB_M2" {
                Form::KreinM2 { alpha2 }
            } else {
                Form::KreinP { alpha2 }
            };
            Ok(with_display(
                form,
                format!("{name}(alpha2={alpha2})"),
                "boundary-coupling family built over kreinB_M1; no exact \
                 reference data",
            ))
        }
        _ => Err(CatalogError::UnknownName {
            name: name.to_string(),
        }),
    }
}

/// The exact spectral measure of a named entry.
pub fn reference_measure(
    name: &str,
    given: &BTreeMap<String, f64>,
) -> Result<MatrixMeasure, CatalogError> {
    Ok(lookup(name, given)?.truth()?.measure)
}

/// One row of `catalog list`.
#[derive(Debug, Clone, Copy)]
pub struct CatalogListing {
    pub name: &'static str,
    pub params: &'static str,
    pub truth: &'static str,
}

/// Every catalog name with its parameter schema and reference-data summary.
pub fn list() -> Vec<CatalogListing> {
    let row = |name, params, truth| CatalogListing { name, params, truth };
    vec![
        row("affine", "c (default 0), d >= 0 (default 1)", "C=c, D=d, zero measure"),
        row("const_imag", "c (default 0), d >= 0 (default 1)", "flat density d/pi on R"),
        row("neg_recip", "-", "unit atom at 0"),
        row("log", "-", "density 1 on (-inf, 0)"),
        row("log_neg_recip", "-", "density 1 on (0, inf)"),
        row("power_r", "r in (0, 1)", "density sin(r pi)/pi |l|^r on (-inf, 0)"),
        row("neg_power_r", "r in (0, 1)", "density sin(r pi)/pi |l|^-r on (-inf, 0)"),
        row("tan", "-", "unit atoms at (n+1/2) pi, truncated, analytic tail"),
        row("neg_cot", "-", "unit atoms at n pi, truncated, analytic tail"),
        row("digamma", "-", "unit atoms at -n (n >= 0), truncated, analytic tail"),
        row("mobius_atom", "lambda1 < lambda2", "atom at lambda1 of mass lambda2-lambda1"),
        row("mobius_log", "lambda1 < lambda2", "density 1 on (lambda1, lambda2)"),
        row(
            "halfline_m",
            "alpha in [0, pi)",
            "atom at -cot^2(alpha) for alpha < pi/2, plus sqrt(l)/(pi(cos^2+l sin^2)) on (0, inf)",
        ),
        row("halfline_dirichlet", "-", "density sqrt(l)/pi on (0, inf)"),
        row("kreinB_M1", "-", "density sqrt(2 l)/pi on (0, inf)"),
        row("kreinB_M2", "alpha2 in [0, pi)", "none"),
        row("kreinB_P", "alpha2 in [0, pi), alpha2 != pi/2", "none"),
    ]
}
