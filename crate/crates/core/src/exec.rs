//! Execution helpers for the data-parallel inner loops.
//!
//! Every parallel site in this crate maps an ordered list of independent
//! work items (documents to vectorize, grid cells to train, labels to fit,
//! trees to grow) through [`par_map`]. Item order is preserved and each item
//! carries its own derived seed, so the results are identical whether the
//! `parallel` feature is enabled or not. [`seq_map`] is always sequential and
//! exists so benchmarks can compare both paths in a single build.

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
///
/// Output order matches input order in both builds.
#[cfg(feature = "parallel")]
pub fn par_map<I, R, F>(items: Vec<I>, f: F) -> Vec<R>
where
    I: Send,
    R: Send,
    F: Fn(I) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

/// Sequential fallback used when the `parallel` feature is disabled.
#[cfg(not(feature = "parallel"))]
pub fn par_map<I, R, F>(items: Vec<I>, f: F) -> Vec<R>
where
    F: Fn(I) -> R,
{
    items.into_iter().map(f).collect()
}

/// Always-sequential map over the same work items.
pub fn seq_map<I, R, F>(items: Vec<I>, f: F) -> Vec<R>
where
    F: Fn(I) -> R,
{
    items.into_iter().map(f).collect()
}
