//! Strictly increasing multi-indices with permutation-parity bookkeeping.
//!
//! All antisymmetry signs in the crate come from the two primitives here:
//! merging two increasing tuples (counting inversions) and inserting a
//! single index (counting the elements it jumps over).

use crate::error::{Error, Result};

/// A strictly increasing tuple of 1-based coordinate indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn empty() -> MultiIndex {
        MultiIndex(Vec::new())
    }

    pub fn new(indices: Vec<u32>) -> Result<MultiIndex> {
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::invalid(
                    "multi-index",
                    format!("indices must be strictly increasing, got {indices:?}"),
                ));
            }
        }
        if indices.first().is_some_and(|&i| i == 0) {
            return Err(Error::invalid("multi-index", "indices are 1-based"));
        }
        Ok(MultiIndex(indices))
    }

    pub fn single(i: u32) -> MultiIndex {
        MultiIndex(vec![i])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn max_index(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn contains(&self, i: u32) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn position(&self, i: u32) -> Option<usize> {
        self.0.binary_search(&i).ok()
    }

    /// Concatenate and sort, tracking the permutation parity. `None` when an
    /// index repeats (the wedge vanishes).
    pub fn wedge_merge(&self, other: &MultiIndex) -> Option<(MultiIndex, i8)> {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0usize, 0usize);
        let mut inversions = 0usize;
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] == other.0[j] {
                return None;
            }
            if self.0[i] < other.0[j] {
                out.push(self.0[i]);
                i += 1;
            } else {
                // other.0[j] jumps over the remaining elements of self
                inversions += self.0.len() - i;
                out.push(other.0[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((MultiIndex(out), sign))
    }

    /// Insert one index; sign is the parity of its final position.
    pub fn insert(&self, idx: u32) -> Option<(MultiIndex, i8)> {
        let pos = self.0.partition_point(|&i| i < idx);
        if self.0.get(pos) == Some(&idx) {
            return None;
        }
        let mut out = self.0.clone();
        out.insert(pos, idx);
        let sign = if pos % 2 == 0 { 1 } else { -1 };
        Some((MultiIndex(out), sign))
    }

    /// Remove the entry at a position.
    pub fn remove_at(&self, pos: usize) -> MultiIndex {
        let mut out = self.0.clone();
        out.remove(pos);
        MultiIndex(out)
    }
}

/// All strictly increasing `k`-tuples in `1..=m`, in lexicographic order.
pub fn k_subsets(m: u32, k: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    if k > m as usize {
        return out;
    }
    let mut cur: Vec<u32> = (1..=k as u32).collect();
    loop {
        out.push(MultiIndex(cur.clone()));
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < m - (k - 1 - i) as u32 {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Binomial coefficient over u128 (sizes here stay small).
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    for i in 0..k {
        num = num * (n - i) as u128 / (i + 1) as u128;
    }
    num
}
