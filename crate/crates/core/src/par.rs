//! Data-parallel batch helpers with a sequential fallback.
//!
//! Every batch in the crate is indexed: item `i` is computed from `i` alone
//! (per-trial seeds are derived from the index), and results are collected in
//! index order. Output is therefore identical in both modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How an indexed batch is executed.
///
/// `Parallel` silently degrades to `Sequential` when the crate is built
/// without the `parallel` feature.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Evaluates `f(0), …, f(n-1)` and returns the results in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Maps over a slice, preserving order.
    pub fn map_slice<'a, S, T, F>(self, items: &'a [S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&'a S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Indices `i < n` for which `pred(i)` holds, in increasing order.
    pub fn filter(self, n: usize, pred: impl Fn(usize) -> bool + Sync + Send) -> Vec<usize> {
        self.map(n, |i| pred(i).then_some(i))
            .into_iter()
            .flatten()
            .collect()
    }

    /// Lowest index `i < n` with `f(i)` returning `Some`, together with the value.
    pub fn find_first<T, F>(self, n: usize, f: F) -> Option<(usize, T)>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            // blocks keep early exit while the minimum index stays exact
            const BLOCK: usize = 256;
            for start in (0..n).step_by(BLOCK) {
                let hit = (start..n.min(start + BLOCK))
                    .into_par_iter()
                    .filter_map(|i| f(i).map(|v| (i, v)))
                    .min_by_key(|(i, _)| *i);
                if hit.is_some() {
                    return hit;
                }
            }
            return None;
        }
        (0..n).find_map(|i| f(i).map(|v| (i, v)))
    }
}

/// Derives the seed of trial `index` from a batch seed (SplitMix64 step).
pub fn trial_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((index as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let f = |i: usize| (i * i) % 7;
        assert_eq!(Execution::Sequential.map(100, f), Execution::Parallel.map(100, f));
        let p = |i: usize| i % 3 == 1;
        assert_eq!(Execution::Sequential.filter(50, p), Execution::Parallel.filter(50, p));
        let g = |i: usize| (i > 10 && i.is_multiple_of(4)).then_some(i * 2);
        assert_eq!(Execution::Parallel.find_first(100, g), Some((12, 24)));
        assert_eq!(Execution::Sequential.find_first(100, g), Some((12, 24)));
    }

    #[test]
    fn trial_seeds_differ() {
        let a: Vec<u64> = (0..1000).map(|i| trial_seed(7, i)).collect();
        let mut b = a.clone();
        b.sort_unstable();
        b.dedup();
        assert_eq!(a.len(), b.len());
    }
}
