//! Random Fourier features: a fixed-size embedding whose inner products
//! approximate the Gaussian kernel.
//!
//! `cargo run --release --example random_features`

use kdist::bench::synthetic_pair;
use kdist::{
    approx_distance_sq, embed_measure, feature_error_report, kernel_distance_sq, sample_feature_map, KernelSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> kdist::Result<()> {
    let sigma = 1.0;
    let k = KernelSpec::gaussian(sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let pairs: Vec<([f64; 2], [f64; 2])> = (0..500)
        .map(|_| {
            let mut p = || [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            (p(), p())
        })
        .collect();

    println!("{:>6} {:>10} {:>10}", "rho", "max err", "rmse");
    for rho in [64, 256, 1024, 4096] {
        let f = sample_feature_map(sigma, 2, rho, 1)?;
        let r = feature_error_report(&k, &f, &pairs)?;
        println!("{rho:>6} {:>10.5} {:>10.5}", r.max_abs, r.rmse);
    }

    let (p, q) = synthetic_pair(2000, 2, 7)?;
    let exact = kernel_distance_sq(&k, &p, &q)?;
    let f = sample_feature_map(sigma, 2, 2048, 1)?;
    let approx = approx_distance_sq(&embed_measure(&f, &p)?, &embed_measure(&f, &q)?)?;
    println!("n = 2000: exact D² = {exact:.3}, features D² = {approx:.3}");
    Ok(())
}
