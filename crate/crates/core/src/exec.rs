//! Sequential / rayon execution strategy.
//!
//! Every helper here produces results independent of the strategy: maps keep
//! input order, maxima and integer counts are order-insensitive, and chunked
//! updates touch disjoint slices.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Defaults to `Parallel` when the `parallel` feature is enabled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Exec {
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
        }
    }

    pub fn map_range<R, F>(self, range: Range<usize>, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            Exec::Sequential => range.map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => range.into_par_iter().map(f).collect(),
        }
    }

    /// Maximum of `f` over `range`; 0 for an empty range. `f` must not return NaN.
    pub fn max_range<F>(self, range: Range<usize>, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        match self {
            Exec::Sequential => range.map(f).fold(0.0, f64::max),
            #[cfg(feature = "parallel")]
            Exec::Parallel => range.into_par_iter().map(f).reduce(|| 0.0, f64::max),
        }
    }

    pub fn count_range<F>(self, range: Range<u64>, f: F) -> u64
    where
        F: Fn(u64) -> bool + Sync + Send,
    {
        match self {
            Exec::Sequential => range.filter(|&i| f(i)).count() as u64,
            #[cfg(feature = "parallel")]
            Exec::Parallel => range.into_par_iter().filter(|&i| f(i)).count() as u64,
        }
    }

    /// Calls `f(offset, chunk)` on consecutive chunks of `data`.
    pub fn for_each_chunk<T, F>(self, data: &mut [T], chunk_len: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        let chunk_len = chunk_len.max(1);
        match self {
            Exec::Sequential => data
                .chunks_mut(chunk_len)
                .enumerate()
                .for_each(|(i, c)| f(i * chunk_len, c)),
            #[cfg(feature = "parallel")]
            Exec::Parallel => data
                .par_chunks_mut(chunk_len)
                .enumerate()
                .for_each(|(i, c)| f(i * chunk_len, c)),
        }
    }
}
