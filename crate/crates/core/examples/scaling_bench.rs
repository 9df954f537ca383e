//! Exact Θ(n²) summation against O(nρ) feature embeddings on synthetic data.
//!
//! `cargo run --release --example scaling_bench`

use kdist::bench::{bench, records_to_csv, BenchConfig};

fn main() -> kdist::Result<()> {
    let cfg = BenchConfig {
        sizes: vec![1000, 2000, 4000, 8000],
        repetitions: 3,
        ..BenchConfig::default()
    };
    print!("{}", records_to_csv(&bench(&cfg)?));
    Ok(())
}
