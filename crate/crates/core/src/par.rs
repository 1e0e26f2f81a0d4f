//! Index-range scans with a rayon backend and a sequential fallback.
//!
//! Every scan is deterministic: `find_first` returns the hit with the smallest
//! index no matter how work is scheduled, and `map` preserves index order.
//! The `_seq` variants are always available and serve as the reference
//! implementation in tests and benches.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// True iff `pred` holds for every index.
pub fn all<F>(range: Range<u64>, pred: F) -> bool
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().all(pred)
    }
    #[cfg(not(feature = "parallel"))]
    {
        all_seq(range, pred)
    }
}

pub fn all_seq<F: Fn(u64) -> bool>(range: Range<u64>, pred: F) -> bool {
    range.into_iter().all(pred)
}

/// Number of indices satisfying `pred`.
pub fn count<F>(range: Range<u64>, pred: F) -> u64
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().filter(|&i| pred(i)).count() as u64
    }
    #[cfg(not(feature = "parallel"))]
    {
        count_seq(range, pred)
    }
}

pub fn count_seq<F: Fn(u64) -> bool>(range: Range<u64>, pred: F) -> u64 {
    range.into_iter().filter(|&i| pred(i)).count() as u64
}

/// First hit in index order.
pub fn find_first<T, F>(range: Range<u64>, f: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        find_first_seq(range, f)
    }
}

pub fn find_first_seq<T, F: Fn(u64) -> Option<T>>(range: Range<u64>, f: F) -> Option<T> {
    range.into_iter().find_map(f)
}

/// `f` applied to every index, results in index order.
pub fn map<T, F>(range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_seq(range, f)
    }
}

pub fn map_seq<T, F: Fn(u64) -> T>(range: Range<u64>, f: F) -> Vec<T> {
    range.into_iter().map(f).collect()
}

/// Configures the global worker pool. Has no effect without the `parallel`
/// feature, and fails if the pool was already initialised.
pub fn set_threads(n: usize) -> Result<(), String> {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
        Ok(())
    }
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
