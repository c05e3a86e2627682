//! Data-parallel map helpers.
//!
//! With the `parallel` feature (default) the indexed maps fan out over the
//! rayon thread pool; without it they degrade to plain sequential loops with
//! identical results. [`seq_map`] is always sequential and exists so the
//! bench suite can compare both paths in one binary.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, in parallel when the `parallel` feature is enabled.
/// Output order always matches index order.
pub fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Fallible variant of [`par_map`]; the first error (by index order in the
/// sequential build, any in the parallel build) is returned.
pub fn par_try_map<T, E, F>(n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Always-sequential indexed map (baseline for benchmarks).
pub fn seq_map<T, F>(n: usize, mut f: F) -> Vec<T>
where
    F: FnMut(usize) -> T,
{
    (0..n).map(&mut f).collect()
}
