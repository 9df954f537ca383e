//! Random Fourier features for the Gaussian kernel.
//!
//! A feature map of dimension `ρ` draws frequencies `ω_k ∈ ℝ^d` and phases
//! `b_k ∈ [0, 2π)` and lifts a point to
//!
//! ```text
//! φ(x)_k = √(2/ρ) · cos(ω_k · x + b_k)
//! ```
//!
//! With `ω_k` drawn i.i.d. normal with per-coordinate standard deviation
//! `√2 / σ`, `E[⟨φ(x), φ(y)⟩] = exp(−‖x − y‖² / σ²)`, which is this crate's
//! Gaussian convention. Measures embed as the weighted sum of lifted points
//! (a `ρ`-vector); currents embed as `Σ_i φ(x_i) ⊗ u_i` (a `ρ × d` matrix).
//! Either way the kernel distance is approximated by a Euclidean (Frobenius)
//! distance computed in `O(nρ)`.
//!
//! ## Reproducibility
//!
//! Sampling uses `ChaCha8Rng::seed_from_u64(seed)`. The stream is consumed in
//! a fixed order: the `ρ × d` frequency matrix row-major, each entry a
//! `StandardNormal` draw times `√2 / σ`, then the `ρ` phases, each a uniform
//! `f64` in `[0, 1)` times `2π`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::currents::CurrentAtoms;
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::reduce::ordered_vec_sum;
use crate::shapes::DiscreteMeasure;

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMapSpec {
    sigma: f64,
    dim: usize,
    rho: usize,
    seed: u64,
    /// `ρ × d`, row-major.
    frequencies: Vec<f64>,
    phases: Vec<f64>,
}

pub fn sample_feature_map(sigma: f64, dim: usize, rho: usize, seed: u64) -> Result<FeatureMapSpec> {
    if rho == 0 {
        return Err(Error::InvalidParameter(
            "feature dimension rho must be at least 1".into(),
        ));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "sigma must be positive and finite, got {sigma}"
        )));
    }
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = std::f64::consts::SQRT_2 / sigma;
    let frequencies = (0..rho * dim)
        .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let phases = (0..rho).map(|_| TAU * rng.random::<f64>()).collect();
    Ok(FeatureMapSpec {
        sigma,
        dim,
        rho,
        seed,
        frequencies,
        phases,
    })
}

impl FeatureMapSpec {
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn frequency(&self, k: usize) -> &[f64] {
        &self.frequencies[k * self.dim..(k + 1) * self.dim]
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            })
        }
    }

    /// Adds `scale · φ(x)` into `out`.
    #[inline]
    fn lift_into(&self, x: &[f64], scale: f64, out: &mut [f64]) {
        let amp = scale * (2.0 / self.rho as f64).sqrt();
        for (k, (o, b)) in out.iter_mut().zip(&self.phases).enumerate() {
            let w = &self.frequencies[k * self.dim..(k + 1) * self.dim];
            let arg: f64 = w.iter().zip(x).map(|(a, c)| a * c).sum::<f64>() + b;
            *o += amp * arg.cos();
        }
    }
}

/// Common view of lifted embeddings as `rows × cols` arrays.
pub trait Lifted {
    /// `(ρ, 1)` for measures, `(ρ, d)` for currents.
    fn shape(&self) -> (usize, usize);
    fn as_slice(&self) -> &[f64];

    fn norm_sq(&self) -> f64 {
        self.as_slice().iter().map(|v| v * v).sum()
    }
}

/// Inner product (Euclidean or Frobenius) of two embeddings.
pub fn inner<L: Lifted>(a: &L, b: &L) -> Result<f64> {
    check_shapes(a, b)?;
    Ok(a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x * y).sum())
}

fn check_shapes<L: Lifted>(a: &L, b: &L) -> Result<()> {
    if a.shape() == b.shape() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        })
    }
}

/// A lifted point or measure: `Σ_p w(p) φ(p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedMeasure {
    pub vector: Vec<f64>,
}

impl Lifted for LiftedMeasure {
    fn shape(&self) -> (usize, usize) {
        (self.vector.len(), 1)
    }

    fn as_slice(&self) -> &[f64] {
        &self.vector
    }
}

/// A lifted current: `ρ × d` matrix, row-major, `M[k][j] = Σ_i φ_k(x_i) u_i[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedCurrent {
    rho: usize,
    dim: usize,
    matrix: Vec<f64>,
}

impl LiftedCurrent {
    pub fn from_row_major(rho: usize, dim: usize, matrix: Vec<f64>) -> Result<Self> {
        if matrix.len() != rho * dim {
            return Err(Error::InvalidParameter(format!(
                "{} entries do not form a {rho}x{dim} matrix",
                matrix.len()
            )));
        }
        Ok(LiftedCurrent { rho, dim, matrix })
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, k: usize, j: usize) -> f64 {
        self.matrix[k * self.dim + j]
    }
}

impl Lifted for LiftedCurrent {
    fn shape(&self) -> (usize, usize) {
        (self.rho, self.dim)
    }

    fn as_slice(&self) -> &[f64] {
        &self.matrix
    }
}

pub fn lift_point(f: &FeatureMapSpec, x: &[f64]) -> Result<LiftedMeasure> {
    f.check_dim(x.len())?;
    let mut vector = vec![0.0; f.rho];
    f.lift_into(x, 1.0, &mut vector);
    Ok(LiftedMeasure { vector })
}

/// `Σ_p w(p) φ(p)`.
pub fn embed_measure(f: &FeatureMapSpec, p: &DiscreteMeasure) -> Result<LiftedMeasure> {
    f.check_dim(p.dim())?;
    let vector = ordered_vec_sum(p.len(), f.rho, |i, out| {
        f.lift_into(p.point(i), p.weights()[i], out);
    });
    Ok(LiftedMeasure { vector })
}

/// `Σ_i φ(x_i) ⊗ u_i` as a `ρ × d` matrix.
pub fn embed_current(f: &FeatureMapSpec, s: &CurrentAtoms) -> Result<LiftedCurrent> {
    f.check_dim(s.dim())?;
    let (rho, dim) = (f.rho, f.dim);
    let matrix = ordered_vec_sum(s.len(), rho * dim, |i, out| {
        let mut phi = vec![0.0; rho];
        f.lift_into(s.position(i), 1.0, &mut phi);
        let u = s.vector(i);
        for (k, p) in phi.iter().enumerate() {
            for (o, uj) in out[k * dim..(k + 1) * dim].iter_mut().zip(u) {
                *o += p * uj;
            }
        }
    });
    Ok(LiftedCurrent { rho, dim, matrix })
}

/// Squared Euclidean (Frobenius) distance between two embeddings.
pub fn approx_distance_sq<L: Lifted>(a: &L, b: &L) -> Result<f64> {
    check_shapes(a, b)?;
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y) * (x - y))
        .sum())
}

/// Statistics of `|⟨φ(x), φ(y)⟩ − K(x, y)|` over a set of pairs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FeatureErrorReport {
    pub max_abs: f64,
    pub mean_abs: f64,
    pub rmse: f64,
}

pub fn feature_error_report<P: AsRef<[f64]>>(
    k: &KernelSpec,
    f: &FeatureMapSpec,
    pairs: &[(P, P)],
) -> Result<FeatureErrorReport> {
    let sigma = match *k {
        KernelSpec::Gaussian { sigma } => sigma,
        KernelSpec::Box { .. } => return Err(Error::NoFeatureMap("box")),
    };
    if sigma != f.sigma {
        return Err(Error::InvalidParameter(format!(
            "feature map was sampled for sigma {} but the kernel has sigma {sigma}",
            f.sigma
        )));
    }
    if pairs.is_empty() {
        return Err(Error::Empty("no point pairs"));
    }
    let (mut max_abs, mut sum_abs, mut sum_sq) = (0.0f64, 0.0, 0.0);
    for (x, y) in pairs {
        let (x, y) = (x.as_ref(), y.as_ref());
        let approx = inner(&lift_point(f, x)?, &lift_point(f, y)?)?;
        let err = (approx - k.eval(x, y)).abs();
        max_abs = max_abs.max(err);
        sum_abs += err;
        sum_sq += err * err;
    }
    let n = pairs.len() as f64;
    Ok(FeatureErrorReport {
        max_abs,
        mean_abs: sum_abs / n,
        rmse: (sum_sq / n).sqrt(),
    })
}
