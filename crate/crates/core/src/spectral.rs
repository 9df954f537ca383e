//! Exact lifting of a finite sample through the Gram eigendecomposition.
//!
//! For a positive semidefinite Gram matrix `G = Q Λ Qᵀ`, the matrix
//! `B = Λ^{1/2} Qᵀ` satisfies `BᵀB = G`, so column `i` of `B` is a Euclidean
//! point whose inner products with the other columns reproduce the kernel.
//! The kernel distance between two weight vectors over the sample is then
//! `‖B (w_P − w_Q)‖`.
//!
//! This is a dense `O(n³)` oracle, capped at [`MAX_POINTS`] points.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::kernels::{gram_matrix, KernelSpec};
use crate::linalg::sym_eigen_desc;
use crate::shapes::DiscreteMeasure;

pub const MAX_POINTS: usize = 4096;

/// Eigenvalues down to `-NOISE_FLOOR_PER_POINT · n` are numerical noise and
/// clamped to zero; anything more negative is genuine indefiniteness.
pub const NOISE_FLOOR_PER_POINT: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct SpectralLift {
    pub points: Vec<Vec<f64>>,
    /// `r × n`; column `i` is the lifted image of `points[i]`.
    pub b: DMatrix<f64>,
    /// Retained eigenvalues, non-increasing, all `≥ 0`.
    pub eigenvalues: Vec<f64>,
    /// Most negative discarded eigenvalue, or 0 if none was discarded.
    pub dropped_negative: f64,
    /// Sum of all discarded eigenvalues.
    pub dropped_sum: f64,
}

pub fn spectral_lift<P: AsRef<[f64]>>(k: &KernelSpec, points: &[P]) -> Result<SpectralLift> {
    if points.len() > MAX_POINTS {
        return Err(Error::InvalidParameter(format!(
            "spectral lifting is limited to {MAX_POINTS} points, got {}",
            points.len()
        )));
    }
    let g = gram_matrix(k, points)?;
    let n = g.nrows();
    let (values, vectors) = sym_eigen_desc(&g)?;
    let floor = -NOISE_FLOOR_PER_POINT * n as f64;

    let keep = values.iter().take_while(|&&v| v >= floor).count();
    let dropped = &values[keep..];
    let dropped_negative = dropped.last().copied().unwrap_or(0.0);
    let dropped_sum = dropped.iter().sum();

    let eigenvalues: Vec<f64> = values[..keep].iter().map(|v| v.max(0.0)).collect();
    let mut b = DMatrix::zeros(keep, n);
    for (r, lambda) in eigenvalues.iter().enumerate() {
        let s = lambda.sqrt();
        for i in 0..n {
            b[(r, i)] = s * vectors[(i, r)];
        }
    }
    Ok(SpectralLift {
        points: points.iter().map(|p| p.as_ref().to_vec()).collect(),
        b,
        eigenvalues,
        dropped_negative,
        dropped_sum,
    })
}

impl SpectralLift {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Lifted coordinates of sample point `i`.
    pub fn coordinates(&self, i: usize) -> Vec<f64> {
        self.b.column(i).iter().copied().collect()
    }

    /// `BᵀB`.
    pub fn reconstruct_gram(&self) -> DMatrix<f64> {
        self.b.transpose() * &self.b
    }

    pub fn is_positive_semidefinite(&self) -> bool {
        self.dropped_negative == 0.0
    }
}

/// `‖B (w_P − w_Q)‖²` for weight vectors indexed over the lifted sample.
pub fn lifted_distance_sq(l: &SpectralLift, weights_p: &[f64], weights_q: &[f64]) -> Result<f64> {
    for w in [weights_p, weights_q] {
        if w.len() != l.len() {
            return Err(Error::DimensionMismatch {
                expected: l.len(),
                found: w.len(),
            });
        }
    }
    let diff = DVector::from_iterator(l.len(), weights_p.iter().zip(weights_q).map(|(a, b)| a - b));
    Ok((&l.b * diff).norm_squared())
}

/// Lifts the disjoint union of `P` and `Q` and returns it with the two
/// measures written as weight vectors over it (zero where absent).
pub fn lift_union(
    k: &KernelSpec,
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
) -> Result<(SpectralLift, Vec<f64>, Vec<f64>)> {
    let union = p.concat(q)?;
    let points: Vec<&[f64]> = union.points().collect();
    let lift = spectral_lift(k, &points)?;
    let mut wp = p.weights().to_vec();
    wp.resize(union.len(), 0.0);
    let mut wq = vec![0.0; p.len()];
    wq.extend_from_slice(q.weights());
    Ok((lift, wp, wq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_points(seed: u64, n: usize, d: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect()
    }

    #[test]
    fn single_point() {
        let l = spectral_lift(&KernelSpec::gaussian(1.0).unwrap(), &[[2.0, 3.0]]).unwrap();
        assert_eq!(l.b, DMatrix::from_element(1, 1, 1.0));
        assert_eq!(l.eigenvalues, vec![1.0]);
        assert_eq!(l.dropped_negative, 0.0);
    }

    #[test]
    fn reconstructs_gaussian_gram() {
        let k = KernelSpec::gaussian(1.0).unwrap();
        let pts = random_points(1, 32, 3);
        let l = spectral_lift(&k, &pts).unwrap();
        let g = gram_matrix(&k, &pts).unwrap();
        let err = (l.reconstruct_gram() - g).amax();
        assert!(err <= 1e-10, "{err}");
        assert!(l.is_positive_semidefinite());
    }

    #[test]
    fn spectrum_sorted_and_trace_preserved() {
        let k = KernelSpec::gaussian(0.5).unwrap();
        let pts = random_points(2, 50, 2);
        let l = spectral_lift(&k, &pts).unwrap();
        assert!(l.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        assert!(l.eigenvalues.iter().all(|&v| v >= 0.0));
        let trace: f64 = l.eigenvalues.iter().sum::<f64>() + l.dropped_sum;
        assert!((trace - 50.0).abs() <= 1e-8 * 50.0);
    }

    #[test]
    fn box_counterexample_is_indefinite() {
        let k = KernelSpec::box_kernel(2.0).unwrap();
        let l = spectral_lift(&k, &[[-1.1], [1.1], [0.0]]).unwrap();
        assert!(l.dropped_negative < -0.1);
        assert!(!l.is_positive_semidefinite());
        assert_eq!(l.rank(), 2);
    }

    #[test]
    fn lifted_distance_properties() {
        let k = KernelSpec::gaussian(1.0).unwrap();
        let pts = random_points(3, 10, 2);
        let l = spectral_lift(&k, &pts).unwrap();
        let wp: Vec<f64> = (0..10).map(|i| i as f64 * 0.1).collect();
        let wq: Vec<f64> = (0..10).map(|i| 1.0 - i as f64 * 0.05).collect();
        assert_eq!(lifted_distance_sq(&l, &wp, &wp).unwrap(), 0.0);
        let base = lifted_distance_sq(&l, &wp, &wq).unwrap();
        let scale = |w: &[f64]| w.iter().map(|v| 3.0 * v).collect::<Vec<_>>();
        let scaled = lifted_distance_sq(&l, &scale(&wp), &scale(&wq)).unwrap();
        assert!((scaled - 9.0 * base).abs() <= 1e-12 * scaled);
        assert!(lifted_distance_sq(&l, &wp[..3], &wq).is_err());
    }

    #[test]
    fn matches_exact_distance() {
        let k = KernelSpec::gaussian(0.8).unwrap();
        let p = DiscreteMeasure::new(random_points(4, 7, 3), (0..7).map(|i| 0.5 + i as f64).collect()).unwrap();
        let q = DiscreteMeasure::unweighted(random_points(5, 9, 3)).unwrap();
        let (l, wp, wq) = lift_union(&k, &p, &q).unwrap();
        let lifted = lifted_distance_sq(&l, &wp, &wq).unwrap();
        let exact = crate::distance::kernel_distance_sq(&k, &p, &q).unwrap();
        assert!((lifted - exact).abs() <= 1e-8, "{lifted} vs {exact}");
    }

    #[test]
    fn too_many_points() {
        let pts = vec![[0.0]; MAX_POINTS + 1];
        assert!(spectral_lift(&KernelSpec::gaussian(1.0).unwrap(), &pts).is_err());
    }
}
