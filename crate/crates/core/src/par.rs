//! Iteration helpers that run on rayon when the `parallel` feature is active
//! and fall back to plain sequential iteration otherwise.
//!
//! Results are always produced in index order, so reductions downstream are
//! deterministic regardless of worker count or feature selection.

/// Caps the global worker count. Returns `false` when the pool was already
/// installed or the build is sequential; results are identical either way.
#[cfg(feature = "parallel")]
pub fn set_max_threads(threads: usize) -> bool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .is_ok()
}

#[cfg(not(feature = "parallel"))]
pub fn set_max_threads(_threads: usize) -> bool {
    false
}

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..len).map(f).collect()
}
