//! Per-document parallelism. With the default "parallel" feature the
//! mapping fans out over a rayon pool; without it the same call runs
//! sequentially. Both preserve input order, so downstream reductions are
//! deterministic either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over the items, in parallel when built with the "parallel"
/// feature. The output order always matches the input order.
#[cfg(feature = "parallel")]
pub fn map_docs<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_docs<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Sequential mapping, available regardless of features; the baseline the
/// parallel path is benchmarked against.
pub fn map_docs_sequential<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
