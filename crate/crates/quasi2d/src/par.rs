//! Data-parallel map helpers.
//!
//! Individual solves in this crate are sequential by design (their
//! tridiagonal sweeps and line searches are serial chains); parallelism is
//! applied one level up, across independent work items: rows of a parameter
//! sweep, or sample points when tabulating an effective potential. These
//! helpers keep that policy in one place. With the `parallel` feature
//! (default) `map_collect` fans out over a rayon pool; without it the call
//! degrades to a plain sequential map with identical output order. The
//! sequential twin `map_collect_seq` is always available so the two paths
//! can be compared directly.

/// Map `f` over `items`, collecting results in input order. Runs on the
/// rayon pool when the `parallel` feature is enabled, sequentially
/// otherwise. `f` must be deterministic: output must not depend on
/// execution order, and it never does here because items are independent.
#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

/// Sequential fallback used when the `parallel` feature is disabled.
#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}

/// Always-sequential map with the same signature as [`map_collect`], kept
/// for direct comparisons (tests and benches) regardless of features.
pub fn map_collect_seq<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}

/// Run `f` inside a rayon pool of the given width (when the `parallel`
/// feature is on); `width = None` uses the default pool. Used by callers
/// that want reproducible thread counts, e.g. benchmarks.
#[cfg(feature = "parallel")]
pub fn with_parallelism<R: Send>(width: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match width {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .expect("failed to build thread pool")
            .install(f),
        None => f(),
    }
}

/// Without the `parallel` feature the width is ignored.
#[cfg(not(feature = "parallel"))]
pub fn with_parallelism<R: Send>(_width: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    f()
}
