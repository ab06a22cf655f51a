//! Inversion counts and the closed-form swap bounds of the double-loop sort.

use serde::{Deserialize, Serialize};

/// Inversions of an array next to the most it could have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InversionSnapshot {
    pub inversions: u64,
    pub max_inversions: u64,
}

impl InversionSnapshot {
    pub fn of<T: Ord>(a: &[T]) -> Self {
        InversionSnapshot { inversions: count_inversions(a), max_inversions: max_inversions(a.len()) }
    }
}

/// Number of pairs `p < q` with `a[p] > a[q]`, by scanning every pair.
///
/// Equal elements never form an inversion.
pub fn count_inversions<T: Ord>(a: &[T]) -> u64 {
    let mut count = 0;
    for (p, x) in a.iter().enumerate() {
        count += a[p + 1..].iter().filter(|y| x > *y).count() as u64;
    }
    count
}

/// Same count as [`count_inversions`] in `O(n log n)` via merge sort.
pub fn count_inversions_merge<T: Ord + Clone>(a: &[T]) -> u64 {
    let mut buf = a.to_vec();
    let mut scratch = a.to_vec();
    merge_count(&mut buf, &mut scratch)
}

fn merge_count<T: Ord + Clone>(a: &mut [T], scratch: &mut [T]) -> u64 {
    let n = a.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = {
        let (left, right) = a.split_at_mut(mid);
        let (sl, sr) = scratch.split_at_mut(mid);
        merge_count(left, sl) + merge_count(right, sr)
    };
    let (mut l, mut r, mut k) = (0, mid, 0);
    while l < mid && r < n {
        // Taking from the right while the left is strictly larger counts
        // every remaining left element as an inversion partner.
        if a[r] < a[l] {
            scratch[k] = a[r].clone();
            count += (mid - l) as u64;
            r += 1;
        } else {
            scratch[k] = a[l].clone();
            l += 1;
        }
        k += 1;
    }
    for x in a[l..mid].iter().chain(a[r..n].iter()) {
        scratch[k] = x.clone();
        k += 1;
    }
    a.clone_from_slice(&scratch[..n]);
    count
}

/// `n(n-1)/2`.
pub fn max_inversions(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapBounds {
    /// `I_max + 1`, independent of the input.
    pub max_inversions_upper: u64,
    /// `I + 2(n-1)`, adaptive to the input's inversions.
    pub adaptive_upper: u64,
    /// `n - 1`, or 0 when there is nothing to relocate.
    pub lower: u64,
}

impl SwapBounds {
    pub fn upper(&self) -> u64 {
        self.max_inversions_upper.min(self.adaptive_upper)
    }

    pub fn contains(&self, swaps: u64) -> bool {
        self.lower <= swaps && swaps <= self.upper()
    }
}

pub fn swap_bounds(n: usize, inversions: u64) -> SwapBounds {
    let n_minus_one = n.saturating_sub(1) as u64;
    SwapBounds {
        max_inversions_upper: max_inversions(n) + 1,
        adaptive_upper: inversions + 2 * n_minus_one,
        lower: n_minus_one,
    }
}
