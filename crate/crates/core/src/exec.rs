// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! Execution mode for data-parallel loops.
//!
//! Every batch API in the crate takes an [`Exec`] so that the same code path
//! can be benchmarked sequentially and on the rayon pool. Results are always
//! collected in input order, so both modes return identical values.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        {
            Exec::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Maps `f` over `items`, preserving order.
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

    /// Maps `f` over `0..n`, preserving order.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
        }
    }

    /// Folds `0..n` into per-chunk accumulators and merges them. `merge` must
    /// be associative and commutative for the result to be mode-independent.
    pub fn fold_range<A, F, M>(self, n: usize, init: impl Fn() -> A + Sync + Send, f: F, merge: M) -> A
    where
        A: Send,
        F: Fn(A, usize) -> A + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        #[cfg(not(feature = "parallel"))]
        let _ = &merge;
        match self {
            Exec::Sequential => (0..n).fold(init(), f),
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n)
                .into_par_iter()
                .fold(&init, &f)
                .reduce(&init, &merge),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = Exec::Sequential.map(&xs, |x| x * x);
        let def = Exec::default().map(&xs, |x| x * x);
        assert_eq!(seq, def);
        let s1 = Exec::Sequential.fold_range(1000, || 0u64, |a, i| a + i as u64, |a, b| a + b);
        let s2 = Exec::default().fold_range(1000, || 0u64, |a, i| a + i as u64, |a, b| a + b);
        assert_eq!(s1, s2);
        assert_eq!(s1, 499_500);
    }
}
