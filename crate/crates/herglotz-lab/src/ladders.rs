//! Sequence-extrapolation helpers shared by the limit machinery: Aitken Δ²
//! acceleration (arbitrary geometric error ratios) and elimination of a
//! known geometric error term (Richardson on halving ladders).

use num_complex::Complex64;

use crate::matrix_kernel::CMatrix;
use crate::quad::QuadValue;

/// Minimal arithmetic needed for Δ² acceleration.
pub(crate) trait Extrapolate: Copy {
    fn ex_sub(self, o: Self) -> Self;
    fn ex_mul(self, o: Self) -> Self;
    fn ex_div(self, o: Self) -> Self;
    fn ex_norm(self) -> f64;
}

impl Extrapolate for f64 {
    fn ex_sub(self, o: Self) -> Self {
        self - o
    }
    fn ex_mul(self, o: Self) -> Self {
        self * o
    }
    fn ex_div(self, o: Self) -> Self {
        self / o
    }
    fn ex_norm(self) -> f64 {
        self.abs()
    }
}

impl Extrapolate for Complex64 {
    fn ex_sub(self, o: Self) -> Self {
        self - o
    }
    fn ex_mul(self, o: Self) -> Self {
        self * o
    }
    fn ex_div(self, o: Self) -> Self {
        self / o
    }
    fn ex_norm(self) -> f64 {
        self.norm()
    }
}

/// One Aitken Δ² pass: `y_k = x_{k+2} − (Δx_{k+1})²/(Δ²x_k)`.
///
/// Entries whose second difference is negligible (already converged or
/// exactly linear) pass through as `x_{k+2}`.
pub(crate) fn aitken_once<T: Extrapolate>(seq: &[T]) -> Vec<T> {
    let scale = seq.iter().map(|x| x.ex_norm()).fold(0.0, f64::max);
    let tiny = f64::EPSILON * (1.0 + scale);
    let mut out = Vec::with_capacity(seq.len().saturating_sub(2));
    for w in seq.windows(3) {
        let d1 = w[1].ex_sub(w[0]);
        let d2 = w[2].ex_sub(w[1]);
        let dd = d2.ex_sub(d1);
        if dd.ex_norm() < tiny {
            out.push(w[2]);
        } else {
            out.push(w[2].ex_sub(d2.ex_mul(d2).ex_div(dd)));
        }
    }
    out
}

/// Iterated Aitken acceleration: applies [`aitken_once`] up to `rounds`
/// times (while at least three terms remain) and returns the last element.
pub(crate) fn aitken_limit<T: Extrapolate>(seq: &[T], rounds: usize) -> T {
    assert!(!seq.is_empty(), "empty sequence");
    let mut cur: Vec<T> = seq.to_vec();
    for _ in 0..rounds {
        if cur.len() < 3 {
            break;
        }
        cur = aitken_once(&cur);
    }
    *cur.last().expect("nonempty by construction")
}

/// Entrywise [`aitken_limit`] on a sequence of equally sized matrices.
pub(crate) fn aitken_matrix_limit(seq: &[CMatrix], rounds: usize) -> CMatrix {
    assert!(!seq.is_empty(), "empty sequence");
    let (r, c) = (seq[0].nrows(), seq[0].ncols());
    CMatrix::from_fn(r, c, |i, j| {
        let entries: Vec<Complex64> = seq.iter().map(|m| m[(i, j)]).collect();
        aitken_limit(&entries, rounds)
    })
}

/// Eliminates a geometric error term from a halving ladder: if
/// `x_k = L + c·q^k + o(q^k)` with known per-step error shrink factor `q`
/// (the new error is `q` times the old at each step), the returned sequence
/// `y_k = (x_{k+1}/q − x_k)/(1/q − 1)` drops the `q^k` term.
///
/// `factor` is `1/q`: on an ε-halving ladder, `factor = 2` removes the
/// O(ε) term, a second pass with `factor = 4` removes O(ε²).
pub(crate) fn eliminate_geometric<V: QuadValue>(seq: &[V], factor: f64) -> Vec<V> {
    assert!(factor != 1.0, "factor 1 cannot eliminate anything");
    let mut out = Vec::with_capacity(seq.len().saturating_sub(1));
    for w in seq.windows(2) {
        let mut y = V::q_zero(&w[0]);
        y.q_add_scaled(factor / (factor - 1.0), &w[1]);
        y.q_add_scaled(-1.0 / (factor - 1.0), &w[0]);
        out.push(y);
    }
    out
}
