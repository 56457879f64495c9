//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) these dispatch to rayon; without it,
//! or with [`Exec::Sequential`], they run on the calling thread. Results are
//! always assembled in index order, so output never depends on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Inputs shorter than this run sequentially even under `Exec::Parallel`.
pub const PARALLEL_THRESHOLD: usize = 256;

/// Smallest batch handed to one rayon task.
#[cfg(feature = "parallel")]
const MIN_BATCH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether `Parallel` actually runs on a thread pool in this build.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// `(0..len).map(f).collect()`, possibly in parallel.
pub fn map_range<T, F>(exec: Exec, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel if len >= PARALLEL_THRESHOLD => (0..len)
            .into_par_iter()
            .with_min_len(MIN_BATCH)
            .map(f)
            .collect(),
        _ => (0..len).map(f).collect(),
    }
}

/// Like [`map_range`] for fallible closures; the first error by index wins.
pub fn try_map_range<T, E, F>(exec: Exec, len: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    map_range(exec, len, f).into_iter().collect()
}

/// `items.iter().map(f).collect()`, possibly in parallel.
pub fn map_slice<S, T, F>(exec: Exec, items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel if items.len() >= PARALLEL_THRESHOLD => {
            items.par_iter().with_min_len(MIN_BATCH).map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}
