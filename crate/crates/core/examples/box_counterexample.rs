//! The box kernel is not positive definite, so its "distance" can go negative.
//!
//! `cargo run --example box_counterexample`

use kdist::{check_positive_definite, gram_matrix, kernel_distance, DiscreteMeasure, KernelSpec};

fn main() -> kdist::Result<()> {
    let a = DiscreteMeasure::unweighted(vec![vec![0.0], vec![0.0], vec![0.0]])?;
    let b = DiscreteMeasure::unweighted(vec![vec![-1.1], vec![1.1], vec![0.0]])?;

    let box_k = KernelSpec::box_kernel(2.0)?;
    let r = kernel_distance(&box_k, &a, &b, None)?;
    println!("box kernel:      D² = {}, D = {:?}", r.d_squared, r.d);

    let pts = [[-1.1], [1.1], [0.0]];
    let report = check_positive_definite(&gram_matrix(&box_k, &pts)?, 1e-8)?;
    println!(
        "box Gram on B:   min eigenvalue {:.6}, PSD = {}",
        report.min_eigenvalue, report.is_positive_semidefinite
    );

    let gauss = KernelSpec::gaussian(1.0)?;
    let r = kernel_distance(&gauss, &a, &b, None)?;
    println!("gaussian kernel: D² = {:.6}, D = {:.6}", r.d_squared, r.d.unwrap());
    Ok(())
}
