//! Exact cross-similarity and kernel distance for discrete measures.
//!
//! All double sums go through one bilinear-form routine with a fixed
//! accumulation order: for each row `i` of the left operand the terms over
//! the right operand are summed in index order into a row total; row totals
//! are summed in blocks of 64 consecutive rows; block totals are summed in
//! block order. Everything is plain `f64` addition, and the result does not
//! depend on the number of threads. Inside a distance, the cross term is
//! evaluated with the operands in a canonical order, so `D²(P, Q)` and
//! `D²(Q, P)` are bitwise equal.

use serde::Serialize;

use crate::error::Result;
use crate::kernels::KernelSpec;
use crate::reduce::ordered_sum;
use crate::shapes::DiscreteMeasure;

/// Relative clamp tolerance for tiny negative squared distances.
pub const CLAMP_TOLERANCE_REL: f64 = 1e-9;

/// `Σ_i Σ_j term(i, j, K(a_i, b_j))` over flat position arrays of dimension `dim`.
pub(crate) fn bilinear_form<F>(k: &KernelSpec, dim: usize, a: &[f64], b: &[f64], term: F) -> f64
where
    F: Fn(usize, usize, f64) -> f64 + Sync,
{
    let nb = b.len() / dim;
    ordered_sum(a.len() / dim, |i| {
        let x = &a[i * dim..(i + 1) * dim];
        let mut row = 0.0;
        for (j, y) in b.chunks_exact(dim).enumerate().take(nb) {
            row += term(i, j, k.eval(x, y));
        }
        row
    })
}

/// Whether `(a_pos, a_w)` sorts after `(b_pos, b_w)` under a total order on
/// the raw data. Cross terms are always summed with the smaller operand as
/// the outer loop, so swapping arguments reproduces the same bits.
pub(crate) fn should_swap(a: (&[f64], &[f64]), b: (&[f64], &[f64])) -> bool {
    let cmp = |x: &[f64], y: &[f64]| {
        x.len().cmp(&y.len()).then_with(|| {
            x.iter()
                .zip(y)
                .map(|(u, v)| u.total_cmp(v))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    };
    cmp(a.0, b.0).then_with(|| cmp(a.1, b.1)).is_gt()
}

/// `κ(P, Q) = Σ_p Σ_q w(p) K(p, q) w'(q)`.
pub fn cross_similarity(k: &KernelSpec, p: &DiscreteMeasure, q: &DiscreteMeasure) -> Result<f64> {
    p.ensure_dim(q)?;
    Ok(cross_similarity_unchecked(k, p, q))
}

fn cross_similarity_unchecked(k: &KernelSpec, p: &DiscreteMeasure, q: &DiscreteMeasure) -> f64 {
    let (wp, wq) = (p.weights(), q.weights());
    bilinear_form(k, p.dim(), p.coords(), q.coords(), |i, j, kv| wp[i] * kv * wq[j])
}

/// The three similarity terms of a kernel distance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimilarityTerms {
    pub pp: f64,
    pub qq: f64,
    pub pq: f64,
}

impl SimilarityTerms {
    pub fn compute(k: &KernelSpec, p: &DiscreteMeasure, q: &DiscreteMeasure) -> Result<Self> {
        p.ensure_dim(q)?;
        let pq = if should_swap((p.coords(), p.weights()), (q.coords(), q.weights())) {
            cross_similarity_unchecked(k, q, p)
        } else {
            cross_similarity_unchecked(k, p, q)
        };
        Ok(SimilarityTerms {
            pp: cross_similarity_unchecked(k, p, p),
            qq: cross_similarity_unchecked(k, q, q),
            pq,
        })
    }

    pub fn distance_sq(&self) -> f64 {
        self.pp + self.qq - 2.0 * self.pq
    }

    /// `1e-9 · max(κ(P,P), κ(Q,Q), 1)`.
    pub fn default_clamp_tolerance(&self) -> f64 {
        CLAMP_TOLERANCE_REL * self.pp.max(self.qq).max(1.0)
    }
}

/// `D²_K(P, Q) = κ(P, P) + κ(Q, Q) − 2 κ(P, Q)`.
///
/// May be negative when `k` is not positive definite.
pub fn kernel_distance_sq(k: &KernelSpec, p: &DiscreteMeasure, q: &DiscreteMeasure) -> Result<f64> {
    Ok(SimilarityTerms::compute(k, p, q)?.distance_sq())
}

/// A squared kernel distance together with its square root, when one exists.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistanceResult {
    pub d_squared: f64,
    /// `None` when `d_squared` is negative beyond the clamp tolerance; the
    /// kernel does not induce a metric on this input.
    pub d: Option<f64>,
    /// `d_squared` was slightly negative and `d` was reported as 0.
    pub clamped: bool,
}

impl DistanceResult {
    pub fn from_squared(d_squared: f64, clamp_tolerance: f64) -> Self {
        if d_squared >= 0.0 {
            DistanceResult {
                d_squared,
                d: Some(d_squared.sqrt()),
                clamped: false,
            }
        } else if d_squared >= -clamp_tolerance {
            DistanceResult {
                d_squared,
                d: Some(0.0),
                clamped: true,
            }
        } else {
            DistanceResult {
                d_squared,
                d: None,
                clamped: false,
            }
        }
    }

    pub fn is_metric(&self) -> bool {
        self.d.is_some()
    }
}

/// Kernel distance with explicit handling of negative squares.
///
/// `clamp_tolerance` defaults to `1e-9 · max(κ(P,P), κ(Q,Q), 1)`.
pub fn kernel_distance(
    k: &KernelSpec,
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
    clamp_tolerance: Option<f64>,
) -> Result<DistanceResult> {
    let terms = SimilarityTerms::compute(k, p, q)?;
    let tol = clamp_tolerance.unwrap_or_else(|| terms.default_clamp_tolerance());
    Ok(DistanceResult::from_squared(terms.distance_sq(), tol))
}
