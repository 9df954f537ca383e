//! Exact finite-dimensional lifting from a Gram eigendecomposition.
//!
//! `cargo run --example spectral_lift`

use kdist::spectral::{lift_union, lifted_distance_sq};
use kdist::{kernel_distance_sq, spectral_lift, DiscreteMeasure, KernelSpec};

fn main() -> kdist::Result<()> {
    let p = DiscreteMeasure::unweighted(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]])?;
    let q = DiscreteMeasure::new(vec![vec![0.5, 0.5], vec![2.0, 1.0]], vec![2.0, 0.5])?;

    let k = KernelSpec::gaussian(1.0)?;
    let (lift, wp, wq) = lift_union(&k, &p, &q)?;
    println!("eigenvalues: {:.6?}", lift.eigenvalues);
    println!("exact  D² = {}", kernel_distance_sq(&k, &p, &q)?);
    println!("lifted D² = {}", lifted_distance_sq(&lift, &wp, &wq)?);

    // The box kernel has a negative eigenvalue here, so no lifting reproduces it.
    let pts = [[-1.1], [1.1], [0.0]];
    let l = spectral_lift(&KernelSpec::box_kernel(2.0)?, &pts)?;
    println!(
        "box: rank {}, dropped negative eigenvalue {:.6}, PSD = {}",
        l.rank(),
        l.dropped_negative,
        l.is_positive_semidefinite()
    );
    Ok(())
}
