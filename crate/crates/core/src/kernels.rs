//! Similarity functions, Gram matrices and positive-definiteness checks.
//!
//! Both kernels satisfy `K(x, x) = 1` and decay with distance:
//!
//! - Gaussian: `K(x, y) = exp(−‖x − y‖² / σ²)`. Note the denominator is `σ²`,
//!   not `2σ²`.
//! - Box: `K(x, y) = 1` if `‖x − y‖ ≤ width`, else `0`. This one is *not*
//!   positive definite, and kernel distances built from it can have a
//!   negative square.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;

/// Default box cutoff radius.
pub const DEFAULT_BOX_WIDTH: f64 = 2.0;

/// Relative PSD tolerance; the absolute tolerance is this times `n`.
pub const PSD_TOLERANCE_PER_POINT: f64 = 1e-8;

/// Largest `|g_ij − g_ji|` accepted as numerically symmetric.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelSpec {
    Gaussian { sigma: f64 },
    Box { width: f64 },
}

impl KernelSpec {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gaussian sigma must be positive and finite, got {sigma}"
            )));
        }
        Ok(KernelSpec::Gaussian { sigma })
    }

    pub fn box_kernel(width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "box width must be positive and finite, got {width}"
            )));
        }
        Ok(KernelSpec::Box { width })
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Gaussian { .. } => "gaussian",
            KernelSpec::Box { .. } => "box",
        }
    }

    /// Whether every Gram matrix of this kernel is positive semidefinite.
    pub fn is_positive_definite(&self) -> bool {
        matches!(self, KernelSpec::Gaussian { .. })
    }

    /// Kernel value as a function of the squared distance `‖x − y‖²`.
    #[inline]
    pub fn eval_sq_dist(&self, sq: f64) -> f64 {
        match *self {
            KernelSpec::Gaussian { sigma } => (-sq / (sigma * sigma)).exp(),
            KernelSpec::Box { width } => {
                if sq.sqrt() <= width {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Evaluates `K(x, y)` without checking dimensions.
    #[inline]
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        self.eval_sq_dist(sq_dist(x, y))
    }
}

#[inline]
pub(crate) fn sq_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

pub fn eval_kernel(k: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::Empty("point has no coordinates"));
    }
    Ok(k.eval(x, y))
}

/// Dense Gram matrix `G_ij = K(x_i, x_j)`.
///
/// Only the upper triangle is evaluated; the lower triangle is mirrored, so
/// the result equals its transpose bit for bit.
pub fn gram_matrix<P: AsRef<[f64]>>(k: &KernelSpec, points: &[P]) -> Result<DMatrix<f64>> {
    let first = points
        .first()
        .ok_or(Error::Empty("gram_matrix needs at least one point"))?;
    let d = first.as_ref().len();
    if d == 0 {
        return Err(Error::Empty("point has no coordinates"));
    }
    for p in points {
        if p.as_ref().len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.as_ref().len(),
            });
        }
    }
    let n = points.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = k.eval(points[i].as_ref(), points[i].as_ref());
        for j in (i + 1)..n {
            let v = k.eval(points[i].as_ref(), points[j].as_ref());
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GramReport {
    pub n: usize,
    pub min_eigenvalue: f64,
    pub is_positive_semidefinite: bool,
    pub tolerance: f64,
}

impl GramReport {
    pub fn default_tolerance(n: usize) -> f64 {
        PSD_TOLERANCE_PER_POINT * n as f64
    }
}

/// Smallest eigenvalue of a symmetric matrix and the resulting PSD verdict.
pub fn check_positive_definite(g: &DMatrix<f64>, tolerance: f64) -> Result<GramReport> {
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be nonnegative, got {tolerance}"
        )));
    }
    if g.nrows() == 0 {
        return Err(Error::Empty("matrix has no rows"));
    }
    if !g.is_square() {
        return Err(Error::ShapeMismatch {
            left: (g.nrows(), g.ncols()),
            right: (g.ncols(), g.nrows()),
        });
    }
    let asym = linalg::max_asymmetry(g);
    if asym > SYMMETRY_TOLERANCE {
        return Err(Error::NotSymmetric(asym));
    }
    let (values, _) = linalg::sym_eigen_desc(g)?;
    let min_eigenvalue = *values.last().expect("non-empty spectrum");
    Ok(GramReport {
        n: g.nrows(),
        min_eigenvalue,
        is_positive_semidefinite: min_eigenvalue >= -tolerance,
        tolerance,
    })
}
