//! Execution policy for the data-parallel scans.
//!
//! Work is always split into the same fixed-size chunks and the per-chunk
//! results are returned in chunk order, so callers that fold them sequentially
//! get identical floating-point results under either policy.

use std::ops::Range;

/// Number of items handled by one task in the chunked scans.
pub const CHUNK: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise identical to
    /// [`Exec::Sequential`].
    #[default]
    Parallel,
}

impl Exec {
    /// Splits `0..len` into chunks of `chunk` items and maps each chunk with `f`.
    pub fn map_chunks<R, F>(self, len: usize, chunk: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(Range<usize>) -> R + Sync + Send,
    {
        let chunk = chunk.max(1);
        let count = len.div_ceil(chunk);
        let range_of = |c: usize| c * chunk..((c + 1) * chunk).min(len);
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel if count > 1 => {
                use rayon::prelude::*;
                (0..count).into_par_iter().map(|c| f(range_of(c))).collect()
            }
            _ => (0..count).map(|c| f(range_of(c))).collect(),
        }
    }

    /// Maps every element of `items` independently, preserving order.
    pub fn map_items<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel if items.len() > 1 => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}
