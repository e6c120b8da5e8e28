use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::rational::pow2;

/// Number of `k`-dimensional subspaces of `F_2^n` (the Gaussian binomial).
pub fn gaussian_binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= pow2(n - i) - &one;
        den *= pow2(i + 1) - &one;
    }
    num / den
}

/// Number of subspaces of codimension at most `s`.
pub fn count_codim_at_most(n: usize, s: usize) -> BigUint {
    (0..=s.min(n)).map(|c| gaussian_binomial(n, c)).sum()
}

/// Number of affine subspaces of codimension at most `c`.
pub fn count_affine_codim_at_most(n: usize, c: usize) -> BigUint {
    (0..=c.min(n)).map(|k| gaussian_binomial(n, k) * pow2(k)).sum()
}

/// Every `k`-dimensional subspace of `F_2^n` (`n <= 64`) exactly once, as RREF
/// basis masks. Order: pivot sets lexicographically, then the free entries
/// counted in binary.
pub struct RrefSubspaces {
    n: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    counter: u64,
    done: bool,
}

impl RrefSubspaces {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(n <= 64, "mask enumeration needs n <= 64");
        let mut it = Self {
            n,
            pivots: (0..k).collect(),
            free: Vec::new(),
            counter: 0,
            done: k > n,
        };
        if !it.done {
            it.refresh_free();
        }
        it
    }

    fn refresh_free(&mut self) {
        self.free.clear();
        for (r, &p) in self.pivots.iter().enumerate() {
            for col in p + 1..self.n {
                if !self.pivots.contains(&col) {
                    self.free.push((r, col));
                }
            }
        }
        self.counter = 0;
    }

    fn advance_pivots(&mut self) -> bool {
        let k = self.pivots.len();
        let n = self.n;
        let Some(i) = (0..k).rev().find(|&i| self.pivots[i] < n - k + i) else {
            return false;
        };
        self.pivots[i] += 1;
        for j in i + 1..k {
            self.pivots[j] = self.pivots[j - 1] + 1;
        }
        true
    }
}

impl Iterator for RrefSubspaces {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let mut rows: Vec<u64> = self.pivots.iter().map(|&p| 1u64 << p).collect();
        for (bit, &(r, col)) in self.free.iter().enumerate() {
            if (self.counter >> bit) & 1 == 1 {
                rows[r] |= 1u64 << col;
            }
        }
        self.counter += 1;
        if self.free.len() >= 64 || self.counter >> self.free.len() != 0 {
            if self.advance_pivots() {
                self.refresh_free();
            } else {
                self.done = true;
            }
        }
        Some(rows)
    }
}

/// Applies `f` to `items` in batches (in parallel within a batch) and feeds
/// results to `sink` in the original order. `sink` returns `false` to stop.
pub(crate) fn par_map_ordered<I, T, R, F, S>(items: I, batch: usize, f: F, mut sink: S)
where
    I: Iterator<Item = T>,
    T: Send + Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
    S: FnMut(T, R) -> bool,
{
    use rayon::prelude::*;
    let mut items = items.peekable();
    while items.peek().is_some() {
        let chunk: Vec<T> = items.by_ref().take(batch).collect();
        let results: Vec<R> = chunk.par_iter().map(&f).collect();
        for (t, r) in chunk.into_iter().zip(results) {
            if !sink(t, r) {
                return;
            }
        }
    }
}
