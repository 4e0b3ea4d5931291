//! The pairwise-comparison oracle: the learner's only view of the target.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{input, Result};
use crate::mask::SubsetMask;
use crate::setfn::{approx_le, SetFn};

/// Answers "is `f(a) ≤ f(b)`?" and counts how often it was asked.
///
/// The target is private; learners only ever see comparison bits. The counter
/// is atomic so concurrent learners may share one oracle.
pub struct ComparisonOracle<F> {
    target: F,
    queries: AtomicU64,
}

/// Where a set falls relative to an oracle-sorted landmark list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LandmarkPosition {
    /// Number of landmarks with `f(L) ≤ f(S)`; the interval index.
    pub at_most: usize,
    /// Number of landmarks with `f(L) < f(S)`.
    pub below: usize,
}

impl LandmarkPosition {
    /// `f(S) ≤ f(L_i)` for the 0-based landmark `i`.
    #[inline]
    pub fn le_landmark(&self, i: usize) -> bool {
        self.below <= i
    }

    /// `f(S) ≥ f(L_j)` for the 0-based landmark `j`.
    #[inline]
    pub fn ge_landmark(&self, j: usize) -> bool {
        self.at_most > j
    }
}

impl<F: SetFn> ComparisonOracle<F> {
    pub fn new(target: F) -> Self {
        Self { target, queries: AtomicU64::new(0) }
    }

    pub fn n(&self) -> usize {
        self.target.n()
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    fn check(&self, s: &SubsetMask) -> Result<()> {
        if s.n() != self.target.n() {
            return input(format!("mask of width {} compared on n = {}", s.n(), self.target.n()));
        }
        Ok(())
    }

    /// `true` exactly when `f(a) ≤ f(b)` (ties count as `≤`).
    pub fn compare(&self, a: &SubsetMask, b: &SubsetMask) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.le(a, b))
    }

    #[inline]
    fn le(&self, a: &SubsetMask, b: &SubsetMask) -> bool {
        self.queries.fetch_add(1, Ordering::Relaxed);
        approx_le(self.target.value(a), self.target.value(b))
    }

    fn le_uncounted(&self, a: &SubsetMask, b: &SubsetMask) -> bool {
        approx_le(self.target.value(a), self.target.value(b))
    }

    /// Stable merge sort driven by comparisons. Returns `perm` such that
    /// `sets[perm[0]], sets[perm[1]], …` is nondecreasing in `f`.
    pub fn oracle_sort(&self, sets: &[SubsetMask]) -> Result<Vec<usize>> {
        for s in sets {
            self.check(s)?;
        }
        let mut perm: Vec<usize> = (0..sets.len()).collect();
        let mut buf = perm.clone();
        self.merge_sort(sets, &mut perm, &mut buf);
        Ok(perm)
    }

    fn merge_sort(&self, sets: &[SubsetMask], idx: &mut [usize], buf: &mut [usize]) {
        let len = idx.len();
        if len <= 1 {
            return;
        }
        let mid = len / 2;
        {
            let (left, right) = idx.split_at_mut(mid);
            let (bl, br) = buf.split_at_mut(mid);
            self.merge_sort(sets, left, bl);
            self.merge_sort(sets, right, br);
        }
        let (mut a, mut b, mut k) = (0, mid, 0);
        while a < mid && b < len {
            // left wins ties, which keeps the sort stable
            if self.le(&sets[idx[a]], &sets[idx[b]]) {
                buf[k] = idx[a];
                a += 1;
            } else {
                buf[k] = idx[b];
                b += 1;
            }
            k += 1;
        }
        buf[k..k + mid - a].copy_from_slice(&idx[a..mid]);
        k += mid - a;
        buf[k..k + len - b].copy_from_slice(&idx[b..len]);
        idx.copy_from_slice(&buf[..len]);
    }

    /// Interval index of `s` among sorted `landmarks`: the number of landmarks
    /// `L` with `f(L) ≤ f(s)`. Uses `⌈log₂(m+1)⌉` comparisons.
    pub fn locate(&self, s: &SubsetMask, landmarks: &[SubsetMask]) -> Result<usize> {
        self.check(s)?;
        self.audit_sorted(landmarks);
        Ok(self.count_prefix(landmarks.len(), |l| self.le(&landmarks[l], s)))
    }

    /// Like [`locate`](Self::locate) but also counts landmarks strictly below
    /// `s`, so tie membership is known without further queries.
    pub fn locate_with_ties(&self, s: &SubsetMask, landmarks: &[SubsetMask]) -> Result<LandmarkPosition> {
        self.check(s)?;
        self.audit_sorted(landmarks);
        let at_most = self.count_prefix(landmarks.len(), |l| self.le(&landmarks[l], s));
        // f(L) < f(s) ⇔ not f(s) ≤ f(L); that prefix lies inside [0, at_most)
        let below = self.count_prefix(at_most, |l| !self.le(s, &landmarks[l]));
        Ok(LandmarkPosition { at_most, below })
    }

    /// Length of the true-prefix of a predicate that is true then false on `0..len`.
    fn count_prefix(&self, len: usize, mut pred: impl FnMut(usize) -> bool) -> usize {
        let (mut lo, mut hi) = (0, len);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if pred(mid) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    fn audit_sorted(&self, landmarks: &[SubsetMask]) {
        if cfg!(debug_assertions) {
            for w in landmarks.windows(2) {
                assert!(self.le_uncounted(&w[0], &w[1]), "landmarks are not oracle-sorted");
            }
        }
    }
}
