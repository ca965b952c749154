//! Execution strategy: data-parallel map with a sequential fallback.
//!
//! Every parallel site in the crate funnels through [`ordered_map`], which
//! evaluates a pure function over `0..n` and returns results in index order.
//! With the `parallel` feature (default) the map runs on the rayon global
//! pool; without it — or when a caller asks for the sequential path at run
//! time — it is a plain loop. Because each index is computed independently
//! and the reduction order is fixed, results are bit-identical across thread
//! counts and between the two paths.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, returning results in index order.
///
/// `sequential` forces the single-threaded path even when the `parallel`
/// feature is compiled in (used by benches to compare both, and by callers
/// that manage their own outer parallelism).
pub(crate) fn ordered_map<T, F>(n: usize, sequential: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if !sequential {
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    let _ = sequential;
    (0..n).map(f).collect()
}

/// Set the number of worker threads for parallel sections.
///
/// Builds the rayon global pool; returns an error string if the pool was
/// already initialized with a different configuration. Without the
/// `parallel` feature this is a no-op. The `RAYON_NUM_THREADS` environment
/// variable is honored when this is never called.
#[cfg(feature = "parallel")]
pub fn set_thread_count(n: usize) -> std::result::Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

/// Sequential build: thread count is fixed at one; accepted and ignored.
#[cfg(not(feature = "parallel"))]
pub fn set_thread_count(_n: usize) -> std::result::Result<(), String> {
    Ok(())
}
