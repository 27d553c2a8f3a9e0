//! Execution policy for the data-parallel inner loops.
//!
//! Every hot loop in the crate (gate application over amplitudes, unitary
//! columns, expectation sums, batch verification) goes through the helpers
//! here. With the `parallel` feature they fan out over rayon; without it, or
//! with [`Exec::Sequential`], they run on the calling thread. Results are
//! identical in both modes: maps preserve order and sums reduce fixed-size
//! chunks in index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chunk length used by [`chunked_sum`]. Fixed so the floating-point
/// summation order does not depend on the thread count.
pub const SUM_CHUNK: usize = 1024;

/// Minimum work items handed to one rayon task.
#[cfg(feature = "parallel")]
const MIN_LEN: usize = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential when the crate is built without `parallel`.
    #[default]
    Parallel,
}

impl Exec {
    /// True when this policy actually runs on the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// `(0..n).map(f).collect()`, in parallel when requested.
pub fn map_range<R, F>(exec: Exec, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().with_min_len(MIN_LEN).map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Order-preserving map over a slice. Intended for coarse items (one matrix,
/// one circuit), so no minimum task length is imposed.
pub fn map_slice<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Deterministic sum of `f(i)` for `i in 0..n`.
///
/// Partial sums over consecutive chunks of [`SUM_CHUNK`] indices are computed
/// independently, then added left to right.
pub fn chunked_sum<F>(exec: Exec, n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunks = n.div_ceil(SUM_CHUNK);
    let partial = |c: usize| {
        let lo = c * SUM_CHUNK;
        let hi = (lo + SUM_CHUNK).min(n);
        (lo..hi).map(&f).sum::<f64>()
    };
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        let parts: Vec<f64> = (0..chunks).into_par_iter().map(partial).collect();
        return parts.into_iter().sum();
    }
    let _ = exec;
    (0..chunks).map(partial).collect::<Vec<_>>().into_iter().sum()
}
