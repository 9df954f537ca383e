//! Integral probability metrics over discrete measures.
//!
//! `d_F(P, Q) = sup_{f ∈ F} |∫ f dP − ∫ f dQ|`. Two choices of `F` are
//! implemented:
//!
//! - the unit ball of the RKHS of a positive definite kernel, where the
//!   supremum is the kernel distance and is attained by the witness
//!   `f = (Σ_p w(p) K(·, p) − Σ_q w'(q) K(·, q)) / D_K`;
//! - the sup-norm unit ball, where the supremum is the ℓ₁ distance between
//!   the weight vectors on the merged support ([`tv_distance`]).
//!
//! Candidate functions are always drawn from the span of `K(·, x_i)` over the
//! union support; by the representer property nothing outside that span can
//! do better.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::distance::{kernel_distance, CLAMP_TOLERANCE_REL};
use crate::error::{Error, Result};
use crate::kernels::{check_positive_definite, gram_matrix, GramReport, KernelSpec};
use crate::shapes::DiscreteMeasure;

/// Kernel distances at or below this are treated as zero by [`witness`].
pub const MIN_DISTINGUISHABLE: f64 = 1e-9;

/// `Σ_x |w_P(x) − w_Q(x)|` after merging points with identical coordinates.
pub fn tv_distance(p: &DiscreteMeasure, q: &DiscreteMeasure) -> Result<f64> {
    p.ensure_dim(q)?;
    // -0.0 and 0.0 are the same coordinate
    let key = |x: &[f64]| x.iter().map(|v| (v + 0.0).to_bits()).collect::<Vec<u64>>();
    let mut merged: BTreeMap<Vec<u64>, (f64, f64)> = BTreeMap::new();
    for (x, w) in p.points().zip(p.weights()) {
        merged.entry(key(x)).or_default().0 += w;
    }
    for (x, w) in q.points().zip(q.weights()) {
        merged.entry(key(x)).or_default().1 += w;
    }
    Ok(merged.values().map(|(a, b)| (a - b).abs()).sum())
}

/// `f(x) = Σ_i a_i K(x, x_i)`.
#[derive(Clone, Debug)]
pub struct WitnessFunction {
    pub support: Vec<Vec<f64>>,
    pub coefficients: Vec<f64>,
    pub kernel: KernelSpec,
}

impl WitnessFunction {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.support
            .iter()
            .zip(&self.coefficients)
            .map(|(s, a)| a * self.kernel.eval(x, s))
            .sum()
    }

    /// `∫ f dP = Σ_p w(p) f(p)`.
    pub fn integrate(&self, p: &DiscreteMeasure) -> f64 {
        p.points().zip(p.weights()).map(|(x, w)| w * self.eval(x)).sum()
    }

    /// `∫ f dP − ∫ f dQ`.
    pub fn discrepancy(&self, p: &DiscreteMeasure, q: &DiscreteMeasure) -> f64 {
        self.integrate(p) - self.integrate(q)
    }

    pub fn negated(&self) -> Self {
        WitnessFunction {
            coefficients: self.coefficients.iter().map(|a| -a).collect(),
            ..self.clone()
        }
    }
}

/// RKHS norm `√(aᵀ G a)` of a function in the span of kernel sections.
pub fn rkhs_norm(f: &WitnessFunction) -> Result<f64> {
    if f.support.len() != f.coefficients.len() {
        return Err(Error::DimensionMismatch {
            expected: f.support.len(),
            found: f.coefficients.len(),
        });
    }
    if f.support.is_empty() {
        return Ok(0.0);
    }
    let g = gram_matrix(&f.kernel, &f.support)?;
    if !f.kernel.is_positive_definite() {
        let report = check_positive_definite(&g, GramReport::default_tolerance(g.nrows()))?;
        if !report.is_positive_semidefinite {
            return Err(Error::Indefinite(report.min_eigenvalue));
        }
    }
    let a = DVector::from_column_slice(&f.coefficients);
    let sq = a.dot(&(&g * &a));
    let tol = CLAMP_TOLERANCE_REL * a.norm_squared().max(1.0);
    if sq < -tol {
        return Err(Error::Indefinite(sq));
    }
    Ok(sq.max(0.0).sqrt())
}

fn require_positive_definite(k: &KernelSpec) -> Result<()> {
    if k.is_positive_definite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "the {} kernel is not positive definite; the RKHS view needs a gaussian kernel",
            k.name()
        )))
    }
}

/// Union support (P's points, then Q's) and the signed weight difference on it.
fn signed_union(p: &DiscreteMeasure, q: &DiscreteMeasure) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    p.ensure_dim(q)?;
    let support = p.points().chain(q.points()).map(<[f64]>::to_vec).collect();
    let diff = p
        .weights()
        .iter()
        .copied()
        .chain(q.weights().iter().map(|w| -w))
        .collect();
    Ok((support, diff))
}

/// The unit-norm function attaining `sup |∫ f dP − ∫ f dQ| = D_K(P, Q)`.
pub fn witness(k: &KernelSpec, p: &DiscreteMeasure, q: &DiscreteMeasure) -> Result<WitnessFunction> {
    require_positive_definite(k)?;
    let dist = kernel_distance(k, p, q, None)?;
    let d = dist.d.unwrap_or(0.0);
    if d <= MIN_DISTINGUISHABLE {
        return Err(Error::Indistinguishable(d));
    }
    let (support, diff) = signed_union(p, q)?;
    Ok(WitnessFunction {
        support,
        coefficients: diff.iter().map(|w| w / d).collect(),
        kernel: *k,
    })
}

/// Precomputed pieces for evaluating many candidate directions.
struct DirectionScorer {
    gram: DMatrix<f64>,
    /// `G (w_P − w_Q)`.
    g_diff: DVector<f64>,
}

impl DirectionScorer {
    fn new(k: &KernelSpec, p: &DiscreteMeasure, q: &DiscreteMeasure) -> Result<Self> {
        let (support, diff) = signed_union(p, q)?;
        let gram = gram_matrix(k, &support)?;
        let g_diff = &gram * DVector::from_vec(diff);
        Ok(DirectionScorer { gram, g_diff })
    }

    /// `|∫ f dP − ∫ f dQ|` for `f = Σ a_i K(·, x_i) / ‖·‖_H`, or 0 for a null direction.
    fn score(&self, a: &DVector<f64>) -> f64 {
        let norm_sq = a.dot(&(&self.gram * a));
        if norm_sq <= 0.0 {
            return 0.0;
        }
        (a.dot(&self.g_diff) / norm_sq.sqrt()).abs()
    }
}

/// Largest discrepancy over the given coefficient vectors, each normalized to
/// unit RKHS norm. Coefficients are indexed over P's points followed by Q's.
pub fn ipm_over_directions(
    k: &KernelSpec,
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
    directions: &[Vec<f64>],
) -> Result<f64> {
    require_positive_definite(k)?;
    let scorer = DirectionScorer::new(k, p, q)?;
    let m = p.len() + q.len();
    let mut best: f64 = 0.0;
    for a in directions {
        if a.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: a.len(),
            });
        }
        best = best.max(scorer.score(&DVector::from_column_slice(a)));
    }
    Ok(best)
}

/// Lower bound on `D_K(P, Q)` from `trials` random unit-norm functions.
///
/// Trial `t` draws standard normal coefficients from
/// `ChaCha8Rng::seed_from_u64(seed + t)`.
pub fn ipm_lower_bound(
    k: &KernelSpec,
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    require_positive_definite(k)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let scorer = DirectionScorer::new(k, p, q)?;
    let m = p.len() + q.len();
    let best = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
            let a = DVector::from_iterator(m, StandardNormal.sample_iter(&mut rng).take(m));
            scorer.score(&a)
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m1(xs: &[f64]) -> DiscreteMeasure {
        DiscreteMeasure::unweighted(xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    fn gauss() -> KernelSpec {
        KernelSpec::gaussian(1.0).unwrap()
    }

    #[test]
    fn tv_cases() {
        let p = m1(&[0.0, 1.0]);
        assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);
        let a = DiscreteMeasure::new(vec![vec![0.0], vec![1.0]], vec![0.5, 0.5]).unwrap();
        let b = DiscreteMeasure::new(vec![vec![2.0], vec![3.0]], vec![0.25, 0.75]).unwrap();
        assert_eq!(tv_distance(&a, &b).unwrap(), 2.0);
        let x = DiscreteMeasure::new(vec![vec![0.0, 0.0]], vec![1.0]).unwrap();
        let xy = DiscreteMeasure::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]], vec![0.5, 0.5]).unwrap();
        assert_eq!(tv_distance(&x, &xy).unwrap(), 1.0);
    }

    #[test]
    fn tv_merges_duplicates_and_signed_zero() {
        let p = DiscreteMeasure::new(vec![vec![0.0], vec![0.0]], vec![0.25, 0.75]).unwrap();
        let q = DiscreteMeasure::new(vec![vec![-0.0]], vec![1.0]).unwrap();
        assert_eq!(tv_distance(&p, &q).unwrap(), 0.0);
        assert!(tv_distance(&p, &DiscreteMeasure::unweighted(vec![vec![0.0, 0.0]]).unwrap()).is_err());
    }

    #[test]
    fn two_point_witness() {
        let (p, q) = (m1(&[0.0]), m1(&[1.0]));
        let w = witness(&gauss(), &p, &q).unwrap();
        let d = (2.0 - 2.0 * (-1.0f64).exp()).sqrt();
        assert!((w.coefficients[0] - 1.0 / d).abs() < 1e-12);
        assert!((w.coefficients[1] + 1.0 / d).abs() < 1e-12);
        assert!((rkhs_norm(&w).unwrap() - 1.0).abs() < 1e-8);
        assert!((w.discrepancy(&p, &q) - d).abs() < 1e-8);
    }

    #[test]
    fn witness_antisymmetric() {
        let p = DiscreteMeasure::new(vec![vec![0.0, 0.1], vec![0.5, 0.5]], vec![1.0, 2.0]).unwrap();
        let q = DiscreteMeasure::unweighted(vec![vec![1.0, 0.0]]).unwrap();
        let pq = witness(&gauss(), &p, &q).unwrap();
        let qp = witness(&gauss(), &q, &p).unwrap();
        // supports are concatenated in argument order
        assert_eq!(qp.coefficients[0], -pq.coefficients[2]);
        assert_eq!(qp.coefficients[1], -pq.coefficients[0]);
        assert_eq!(qp.coefficients[2], -pq.coefficients[1]);
        assert!((pq.discrepancy(&p, &q) + qp.discrepancy(&p, &q)).abs() < 1e-12);
    }

    #[test]
    fn witness_errors() {
        let p = m1(&[0.0, 1.0]);
        assert!(matches!(witness(&gauss(), &p, &p), Err(Error::Indistinguishable(_))));
        let b = KernelSpec::box_kernel(2.0).unwrap();
        assert!(witness(&b, &p, &m1(&[3.0])).is_err());
        assert!(ipm_lower_bound(&gauss(), &p, &m1(&[3.0]), 0, 1).is_err());
    }

    #[test]
    fn rkhs_norm_cases() {
        let w = WitnessFunction {
            support: vec![vec![0.0], vec![1.0]],
            coefficients: vec![0.0, 0.0],
            kernel: gauss(),
        };
        assert_eq!(rkhs_norm(&w).unwrap(), 0.0);
        let one = WitnessFunction {
            support: vec![vec![4.0]],
            coefficients: vec![1.0],
            kernel: gauss(),
        };
        assert_eq!(rkhs_norm(&one).unwrap(), 1.0);
        let indefinite = WitnessFunction {
            support: vec![vec![-1.1], vec![1.1], vec![0.0]],
            coefficients: vec![1.0, 1.0, -1.0],
            kernel: KernelSpec::box_kernel(2.0).unwrap(),
        };
        assert!(matches!(rkhs_norm(&indefinite), Err(Error::Indefinite(_))));
    }

    #[test]
    fn canonical_direction_attains_distance() {
        let p = DiscreteMeasure::new(vec![vec![0.0, 0.0], vec![0.3, 0.2]], vec![1.0, 0.5]).unwrap();
        let q = DiscreteMeasure::unweighted(vec![vec![1.0, 1.0], vec![-0.2, 0.4]]).unwrap();
        let k = gauss();
        let w = witness(&k, &p, &q).unwrap();
        let d = kernel_distance(&k, &p, &q, None).unwrap().d.unwrap();
        let got = ipm_over_directions(&k, &p, &q, &[vec![1.0, 0.0, 0.0, 0.0], w.coefficients.clone()]).unwrap();
        assert!((got - d).abs() < 1e-8);
        let lb = ipm_lower_bound(&k, &p, &q, 200, 5).unwrap();
        assert!(lb >= 0.0 && lb <= d + 1e-9);
    }

    #[test]
    fn lower_bound_is_seed_deterministic() {
        let p = m1(&[0.0, 0.2, 0.4]);
        let q = m1(&[2.0, 2.5]);
        let a = ipm_lower_bound(&gauss(), &p, &q, 50, 11).unwrap();
        let b = ipm_lower_bound(&gauss(), &p, &q, 50, 11).unwrap();
        assert_eq!(a, b);
    }
}
