//! Deterministic parallel reductions.
//!
//! Indices are grouped into fixed blocks of [`BLOCK`] consecutive items. Each
//! block is accumulated sequentially in index order, and the block partials
//! are then added sequentially in block order. The result therefore depends
//! only on the inputs, never on the number of worker threads.

use rayon::prelude::*;

pub(crate) const BLOCK: usize = 64;

pub(crate) fn ordered_sum<F>(n: usize, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let partials: Vec<f64> = (0..n.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut acc = 0.0;
            for i in b * BLOCK..n.min((b + 1) * BLOCK) {
                acc += term(i);
            }
            acc
        })
        .collect();
    partials.iter().fold(0.0, |acc, x| acc + x)
}

/// Sums `len`-vectors produced by `accumulate(i, out)`, which must add item
/// `i`'s contribution into `out`.
pub(crate) fn ordered_vec_sum<F>(n: usize, len: usize, accumulate: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    let partials: Vec<Vec<f64>> = (0..n.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![0.0; len];
            for i in b * BLOCK..n.min((b + 1) * BLOCK) {
                accumulate(i, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; len];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    total
}
