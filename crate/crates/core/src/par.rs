//! Data-parallel helpers. With the `parallel` feature these run on the
//! rayon pool; without it they fall back to plain iteration.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Apply `f` to every item, preserving order.
#[cfg(feature = "parallel")]
pub fn map<T: Send, R: Send>(items: Vec<T>, f: impl Fn(T) -> R + Sync + Send) -> Vec<R> {
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T: Send, R: Send>(items: Vec<T>, f: impl Fn(T) -> R + Sync + Send) -> Vec<R> {
    items.into_iter().map(f).collect()
}

/// Apply `f` to `0..n`, preserving order.
pub fn map_range<R: Send>(n: usize, f: impl Fn(usize) -> R + Sync + Send) -> Vec<R> {
    map((0..n).collect(), f)
}

/// Sequential reference for [`map`], always available (benchmarks compare
/// the two).
pub fn map_sequential<T, R>(items: Vec<T>, f: impl Fn(T) -> R) -> Vec<R> {
    items.into_iter().map(f).collect()
}
