//! Execution strategy for the index sweeps (pointwise evaluation, exact
//! comparison against the oracle, convolution sums).
//!
//! With the `parallel` feature (on by default) [`Exec::Parallel`] fans the
//! sweep out over the rayon pool; without it every strategy runs
//! sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// `f(lo), f(lo + 1), .., f(hi)` in order.
    pub fn map_range<T, F>(self, lo: usize, hi: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        if hi < lo {
            return Vec::new();
        }
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (lo..=hi).into_par_iter().map(f).collect(),
            _ => (lo..=hi).map(f).collect(),
        }
    }

    pub fn map_slice<A, T, F>(self, items: &[A], f: F) -> Vec<T>
    where
        A: Sync,
        T: Send,
        F: Fn(&A) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }
}
