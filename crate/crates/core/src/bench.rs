//! Timing harness contrasting the exact `Θ(n²)` double sum with the `O(nρ)`
//! random-feature path on identical synthetic inputs.

use std::fmt::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distance::kernel_distance_sq;
use crate::error::{Error, Result};
use crate::features::{approx_distance_sq, embed_measure, sample_feature_map};
use crate::kernels::KernelSpec;
use crate::shapes::DiscreteMeasure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Features,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Features => "features",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    /// Total number of points across both inputs.
    pub n: usize,
    pub method: Method,
    pub rho: Option<usize>,
    /// Median wall time of the computation, parsing and input generation excluded.
    pub wall_time_ms: f64,
    pub d_squared: f64,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub rho: usize,
    pub seed: u64,
    pub sigma: f64,
    pub dim: usize,
    pub repetitions: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![1000, 2000, 4000],
            rho: 256,
            seed: 0,
            sigma: 1.0,
            dim: 3,
            repetitions: 5,
        }
    }
}

/// Two unit-weight point sets with `n` points in total: `P` uniform on
/// `[0, 1)^d` with `n − n/2` points, `Q` uniform on `[0.25, 1.25)^d` with
/// `n/2` points. Drawn from `ChaCha8Rng::seed_from_u64(seed)`, `P` first.
pub fn synthetic_pair(n: usize, dim: usize, seed: u64) -> Result<(DiscreteMeasure, DiscreteMeasure)> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "bench size must be at least 2, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cloud = |count: usize, offset: f64| {
        let coords: Vec<f64> = (0..count * dim).map(|_| offset + rng.random::<f64>()).collect();
        DiscreteMeasure::from_flat(dim, coords, vec![1.0; count])
    };
    let p = cloud(n - n / 2, 0.0)?;
    let q = cloud(n / 2, 0.25)?;
    Ok((p, q))
}

/// Squared distance through the feature path: sample, embed both, compare.
pub fn features_distance_sq(
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
    sigma: f64,
    rho: usize,
    seed: u64,
) -> Result<f64> {
    let f = sample_feature_map(sigma, p.dim(), rho, seed)?;
    approx_distance_sq(&embed_measure(&f, p)?, &embed_measure(&f, q)?)
}

fn median_time<F: FnMut() -> Result<f64>>(reps: usize, mut run: F) -> Result<(f64, f64)> {
    let mut times = Vec::with_capacity(reps);
    let mut value = 0.0;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        value = run()?;
        times.push(start.elapsed().as_secs_f64() * 1e3);
    }
    times.sort_by(f64::total_cmp);
    Ok((times[times.len() / 2], value))
}

/// One exact and one feature record per size, in that order.
pub fn bench(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let k = KernelSpec::gaussian(config.sigma)?;
    let mut records = Vec::with_capacity(2 * config.sizes.len());
    for &n in &config.sizes {
        let (p, q) = synthetic_pair(n, config.dim, config.seed)?;
        let (t, d2) = median_time(config.repetitions, || kernel_distance_sq(&k, &p, &q))?;
        records.push(BenchRecord {
            n,
            method: Method::Exact,
            rho: None,
            wall_time_ms: t,
            d_squared: d2,
        });
        let (t, d2) = median_time(config.repetitions, || {
            features_distance_sq(&p, &q, config.sigma, config.rho, config.seed)
        })?;
        records.push(BenchRecord {
            n,
            method: Method::Features,
            rho: Some(config.rho),
            wall_time_ms: t,
            d_squared: d2,
        });
    }
    Ok(records)
}

pub fn records_to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from("n,method,rho,wall_time_ms,d_squared\n");
    for r in records {
        let rho = r.rho.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.n,
            r.method.as_str(),
            rho,
            r.wall_time_ms,
            r.d_squared
        );
    }
    out
}
