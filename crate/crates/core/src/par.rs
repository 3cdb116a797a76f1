//! Data-parallel helpers.
//!
//! With the `parallel` feature the helpers fan out over rayon's pool unless
//! [`set_enabled`] has switched them off at runtime; without the feature
//! they are plain sequential loops.

use std::sync::atomic::{AtomicBool, Ordering};

static ENABLED: AtomicBool = AtomicBool::new(true);

/// Runtime switch, mainly for benchmarking both paths in one binary.
pub fn set_enabled(on: bool) {
    ENABLED.store(on, Ordering::Relaxed);
}

pub fn enabled() -> bool {
    cfg!(feature = "parallel") && ENABLED.load(Ordering::Relaxed)
}

/// `items.iter().map(f).collect()`, order preserved.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if enabled() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// `(0..n).map(f).collect()`, order preserved.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if enabled() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// Concatenation of `f(i)` over `0..n`, order preserved.
pub fn flat_map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> Vec<R> + Sync + Send,
{
    map_range(n, f).into_iter().flatten().collect()
}

/// True iff `f(i)` holds for every i in `0..n`.
pub fn all_range<F>(n: usize, f: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if enabled() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().all(f);
    }
    (0..n).all(f)
}
