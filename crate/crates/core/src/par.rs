//! Order-stable parallel reductions.
//!
//! Work is cut into fixed-size chunks independent of the thread count; each
//! chunk is folded sequentially and the chunk results are merged left to
//! right. Floating-point results are therefore bit-identical for any pool size.

use rayon::prelude::*;

pub const CHUNK: usize = 1024;

pub fn fold_chunks<A, I, F, M>(n: usize, init: I, fold: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(A, usize) -> A + Sync,
    M: Fn(A, A) -> A,
{
    let chunks = n.div_ceil(CHUNK);
    let partial: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            (lo..hi).fold(init(), &fold)
        })
        .collect();
    partial.into_iter().fold(init(), merge)
}

/// Parallel map over `0..n` with results in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn result_is_independent_of_pool_size() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    fold_chunks(100_003, || 0.0f64, |a, i| a + (i as f64).sqrt().sin(), |a, b| a + b)
                })
        };
        assert_eq!(run(1).to_bits(), run(3).to_bits());
        assert_eq!(run(1).to_bits(), run(8).to_bits());
    }

    #[test]
    fn empty_range_returns_init() {
        assert_eq!(fold_chunks(0, || 5usize, |a, _| a + 1, |a, b| a + b - 5), 5);
    }
}
