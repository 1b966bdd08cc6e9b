//! Exact binomial coefficients and colexicographic ranking of k-subsets.
//!
//! The colex rank of an ascending subset `s_0 < ... < s_{k-1}` is
//! `sum_i C(s_i, i+1)`. Ranking and unranking are mutually inverse
//! bijections between `[0, C(n,k))` and the k-subsets of `{0..n-1}`,
//! which lets samplers draw uniform subsets without materializing them.

use crate::error::{Error, Result};
use crate::hypergraph::VertexSet;

/// Exact `C(a, b)`; returns 0 when `b > a`, errors instead of wrapping.
pub fn binomial(a: u64, b: u64) -> Result<u64> {
    if b > a {
        return Ok(0);
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 1..=b {
        // acc * (a - b + i) stays exact; division by i is always exact here.
        acc = acc
            .checked_mul((a - b + i) as u128)
            .ok_or(Error::Overflow { a, b })?
            / i as u128;
        if acc > u64::MAX as u128 {
            return Err(Error::Overflow { a, b });
        }
    }
    Ok(acc as u64)
}

/// Colex rank of `s` among the |s|-subsets of `{0..n-1}`.
pub fn rank_subset(s: &VertexSet, n: u32) -> Result<u64> {
    if s.iter().any(|&v| v >= n) {
        return Err(Error::Parameter(format!(
            "vertex id out of range for ground set of size {n}"
        )));
    }
    let mut rank: u64 = 0;
    for (i, &v) in s.iter().enumerate() {
        let term = binomial(v as u64, i as u64 + 1)?;
        rank = rank
            .checked_add(term)
            .ok_or(Error::Overflow { a: v as u64, b: i as u64 + 1 })?;
    }
    Ok(rank)
}

/// Inverse of [`rank_subset`]: the k-subset of `{0..n-1}` with colex rank `r`.
pub fn unrank_subset(r: u64, n: u32, k: u32) -> Result<VertexSet> {
    let bound = binomial(n as u64, k as u64)?;
    if r >= bound {
        return Err(Error::RankOutOfRange { rank: r, bound, n, k });
    }
    let mut rest = r;
    let mut out = vec![0u32; k as usize];
    let mut hi = n;
    for i in (1..=k).rev() {
        // Largest c with C(c, i) <= rest; c < hi keeps elements descending.
        let mut c = hi - 1;
        loop {
            let val = binomial(c as u64, i as u64)?;
            if val <= rest {
                rest -= val;
                break;
            }
            c -= 1;
        }
        out[i as usize - 1] = c;
        hi = c;
    }
    VertexSet::new(out, n)
}

/// Iterates the size-`r` subsets of `items` in colex order of index sets.
pub fn subsets_of<'a>(items: &'a [u32], r: usize) -> impl Iterator<Item = Vec<u32>> + 'a {
    SubsetIter::new(items, r)
}

struct SubsetIter<'a> {
    items: &'a [u32],
    idx: Vec<usize>,
    done: bool,
}

impl<'a> SubsetIter<'a> {
    fn new(items: &'a [u32], r: usize) -> Self {
        let done = r > items.len();
        SubsetIter { items, idx: (0..r).collect(), done }
    }
}

impl<'a> Iterator for SubsetIter<'a> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out: Vec<u32> = self.idx.iter().map(|&i| self.items[i]).collect();
        // Advance in colex: bump the lowest index that has room below its successor.
        let r = self.idx.len();
        if r == 0 {
            self.done = true;
            return Some(out);
        }
        let mut j = 0;
        loop {
            let limit = if j + 1 < r { self.idx[j + 1] } else { self.items.len() };
            if self.idx[j] + 1 < limit {
                self.idx[j] += 1;
                for i in 0..j {
                    self.idx[i] = i;
                }
                break;
            }
            j += 1;
            if j == r {
                self.done = true;
                break;
            }
        }
        Some(out)
    }
}
