//! The kernel distance as an integral probability metric: the witness function
//! attains it, random unit-norm functions only bound it from below.
//!
//! `cargo run --example ipm_witness`

use kdist::ipm::{ipm_lower_bound, rkhs_norm, tv_distance, witness};
use kdist::{kernel_distance, DiscreteMeasure, KernelSpec};

fn main() -> kdist::Result<()> {
    let p = DiscreteMeasure::unweighted(vec![vec![0.0, 0.0], vec![0.2, 0.1], vec![-0.1, 0.2]])?;
    let q = DiscreteMeasure::unweighted(vec![vec![2.0, 0.0], vec![2.1, -0.2]])?;
    let k = KernelSpec::gaussian(1.0)?;

    let d = kernel_distance(&k, &p, &q, None)?.d.unwrap();
    let w = witness(&k, &p, &q)?;
    println!("D_K                  = {d:.9}");
    println!(
        "witness discrepancy  = {:.9} (norm {:.9})",
        w.discrepancy(&p, &q),
        rkhs_norm(&w)?
    );
    for trials in [1, 10, 100, 1000] {
        println!(
            "best of {trials:>4} random = {:.9}",
            ipm_lower_bound(&k, &p, &q, trials, 0)?
        );
    }
    println!("total variation      = {}", tv_distance(&p, &q)?);
    Ok(())
}
