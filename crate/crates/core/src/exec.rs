//! Execution strategy for the data-parallel inner loops (grid cells, seed
//! batches, parameter sweeps).
//!
//! `Parallel` uses rayon when the `parallel` feature is enabled and silently
//! degrades to the sequential path otherwise. Results are always merged in
//! index order, so both modes produce identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

/// Apply `f` to `0..n` and collect results in index order.
pub fn map_indices<U, F>(mode: ExecMode, n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    match mode {
        ExecMode::Sequential => (0..n).map(f).collect(),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                (0..n).into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..n).map(f).collect()
            }
        }
    }
}

/// Apply `f` to each item and collect results in index order.
pub fn map_slice<T, U, F>(mode: ExecMode, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    map_indices(mode, items.len(), |i| f(&items[i]))
}

/// Run `f` inside a rayon pool with `threads` workers. With one thread (or a
/// sequential build) this is a plain call.
pub fn with_threads<R, F>(threads: Option<usize>, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    match threads {
        Some(1) | None => f(),
        Some(n) => {
            #[cfg(feature = "parallel")]
            {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .expect("thread pool");
                pool.install(f)
            }
            #[cfg(not(feature = "parallel"))]
            {
                let _ = n;
                f()
            }
        }
    }
}
