//! Learners that choose their own queries.
//!
//! Boolean submodular targets with `f(∅) = 0` are disjunctions and are
//! recovered with one query per element. Targets with range `{0, …, k}` are
//! learned up to comparisons by sorting every small subset into buckets of
//! equal value.

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::mask::{count_subsets, subsets_by_size, SubsetMask};
use crate::oracle::ComparisonOracle;
use crate::setfn::SetFn;

pub const MAX_BUCKET_SUBSETS: u128 = 5_000_000;

/// Support of the disjunction that agrees with `oracle`'s target.
pub fn learn_disjunction<F: SetFn>(oracle: &ComparisonOracle<F>) -> Result<SubsetMask> {
    let n = oracle.n();
    let empty = SubsetMask::try_empty(n)?;
    let mut support = empty;
    for i in 0..n {
        if !oracle.compare(&empty.with(i), &empty)? {
            support.insert(i);
        }
    }
    Ok(support)
}

/// Subsets of size at most `s`, grouped by value in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BucketPredictor {
    pub n: usize,
    pub subset_size_bound: usize,
    pub buckets: Vec<Vec<SubsetMask>>,
    /// Oracle calls spent building the buckets.
    pub query_count: u64,
}

/// Buckets over all subsets of size at most `2k`.
pub fn learn_buckets<F: SetFn>(oracle: &ComparisonOracle<F>, k: usize) -> Result<BucketPredictor> {
    if k == 0 {
        return input("k must be positive");
    }
    build_buckets(oracle, 2 * k)
}

/// Buckets over subsets of size at most `2k/α`; `α` must divide `2k`.
pub fn learn_buckets_approx<F: SetFn>(oracle: &ComparisonOracle<F>, k: usize, alpha: usize) -> Result<BucketPredictor> {
    if k == 0 || alpha == 0 {
        return input("k and alpha must be positive");
    }
    if !(2 * k).is_multiple_of(alpha) {
        return input(format!("alpha = {alpha} does not divide 2k = {}", 2 * k));
    }
    build_buckets(oracle, 2 * k / alpha)
}

fn build_buckets<F: SetFn>(oracle: &ComparisonOracle<F>, s: usize) -> Result<BucketPredictor> {
    let n = oracle.n();
    let s = s.min(n);
    let total = count_subsets(n, 0, s);
    if total > MAX_BUCKET_SUBSETS {
        return Err(Error::Capacity { what: "bucket subsets".into(), dim: total, limit: MAX_BUCKET_SUBSETS });
    }
    let start = oracle.queries();
    let sets = subsets_by_size(n, 0, s);
    let order = oracle.oracle_sort(&sets)?;
    let mut buckets: Vec<Vec<SubsetMask>> = Vec::new();
    let mut prev: Option<SubsetMask> = None;
    for &i in &order {
        let cur = sets[i];
        // sorted, so prev ≤ cur is known; equal iff cur ≤ prev as well
        let same = match prev {
            Some(p) => oracle.compare(&cur, &p)?,
            None => false,
        };
        if same {
            buckets.last_mut().expect("bucket open").push(cur);
        } else {
            buckets.push(vec![cur]);
        }
        prev = Some(cur);
    }
    Ok(BucketPredictor { n, subset_size_bound: s, buckets, query_count: oracle.queries() - start })
}

impl BucketPredictor {
    /// Highest bucket index holding a subset of `s`.
    pub fn top_bucket(&self, s: &SubsetMask) -> Result<usize> {
        if s.n() != self.n {
            return input(format!("mask of width {} on a predictor with n = {}", s.n(), self.n));
        }
        for (idx, bucket) in self.buckets.iter().enumerate().rev() {
            if bucket.iter().any(|b| b.is_subset_of(s)) {
                return Ok(idx);
            }
        }
        Err(Error::Invariant("no bucket contains the empty set".into()))
    }

    /// `true` when `a` is predicted to be worth at most `b`. No oracle calls.
    pub fn predict(&self, a: &SubsetMask, b: &SubsetMask) -> Result<bool> {
        Ok(self.top_bucket(a)? <= self.top_bucket(b)?)
    }

    pub fn num_subsets(&self) -> usize {
        self.buckets.iter().map(Vec::len).sum()
    }
}
