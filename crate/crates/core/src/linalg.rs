use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Largest `|g_ij - g_ji|`.
pub(crate) fn max_asymmetry(g: &DMatrix<f64>) -> f64 {
    let n = g.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((g[(i, j)] - g[(j, i)]).abs());
        }
    }
    worst
}

/// Symmetric eigendecomposition with eigenvalues sorted in descending order.
///
/// Eigenvector `i` is column `i` of the returned matrix, with its first
/// entry of magnitude above `1e-12` made positive.
pub(crate) fn sym_eigen_desc(g: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    if !g.is_square() {
        return Err(Error::ShapeMismatch {
            left: (g.nrows(), g.ncols()),
            right: (g.ncols(), g.nrows()),
        });
    }
    let n = g.nrows();
    let eig = SymmetricEigen::try_new(g.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Eigen(format!("no convergence for {n}x{n} matrix")))?;
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigen("non-finite eigenvalue".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let sign = match col.iter().find(|v| v.abs() > 1e-12) {
            Some(v) if *v < 0.0 => -1.0,
            _ => 1.0,
        };
        vectors.set_column(dst, &(col * sign));
    }
    Ok((values, vectors))
}
