//! Fixed-width subsets of the ground set `{0, …, n-1}`.
//!
//! Elements are 0-based throughout the crate. A [`SubsetMask`] carries its
//! ground-set size so that width mismatches are caught at the boundary
//! (oracle, evaluation, feature maps) instead of silently truncating.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{input, Result};

/// Largest supported ground set.
pub const MAX_N: usize = 1024;
/// Largest ground set for which exhaustive enumeration of `2^n` is allowed.
pub const MAX_EXHAUSTIVE_N: usize = 63;

const WORDS: usize = MAX_N / 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    n: u16,
    words: [u64; WORDS],
}

#[inline]
fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl SubsetMask {
    /// The empty set over a ground set of size `n`.
    ///
    /// Panics if `n > MAX_N`; use [`SubsetMask::try_empty`] for untrusted sizes.
    pub fn empty(n: usize) -> Self {
        Self::try_empty(n).expect("ground set too large")
    }

    pub fn try_empty(n: usize) -> Result<Self> {
        if n > MAX_N {
            return input(format!("ground set size {n} exceeds {MAX_N}"));
        }
        Ok(Self { n: n as u16, words: [0; WORDS] })
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn from_elems(n: usize, elems: &[usize]) -> Result<Self> {
        let mut s = Self::try_empty(n)?;
        for &e in elems {
            if e >= n {
                return input(format!("element {e} outside ground set of size {n}"));
            }
            s.insert(e);
        }
        Ok(s)
    }

    /// Builds a mask from the low `n` bits of `bits` (`n ≤ 64`).
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        if n > 64 {
            return input(format!("from_bits needs n <= 64, got {n}"));
        }
        if n < 64 && bits >> n != 0 {
            return input(format!("mask {bits:#x} has bits above n = {n}"));
        }
        let mut s = Self::empty(n);
        s.words[0] = bits;
        Ok(s)
    }

    /// Low 64 bits, available when `n ≤ 64`.
    pub fn bits(&self) -> Option<u64> {
        (self.n <= 64).then_some(self.words[0])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.active().iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.active().iter().all(|&w| w == 0)
    }

    #[inline]
    fn active(&self) -> &[u64] {
        &self.words[..word_count(self.n as usize)]
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.n() && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Panics when `i >= n`.
    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.n(), "element {i} outside ground set of size {}", self.n);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.n() {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn with(mut self, i: usize) -> Self {
        self.insert(i);
        self
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = *self;
        for (a, b) in out.words.iter_mut().zip(other.words.iter()).take(word_count(self.n())) {
            *a |= *b;
        }
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = *self;
        for (a, b) in out.words.iter_mut().zip(other.words.iter()).take(word_count(self.n())) {
            *a &= *b;
        }
        out
    }

    #[inline]
    pub fn intersects(&self, other: &Self) -> bool {
        self.active().iter().zip(other.active()).any(|(a, b)| a & b != 0)
    }

    #[inline]
    pub fn intersection_len(&self, other: &Self) -> usize {
        self.active()
            .iter()
            .zip(other.active())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.active().iter().zip(other.active()).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&i| self.contains(i))
    }

    pub fn elems(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Numeric comparison of the bit patterns, most significant word first.
    fn cmp_numeric(&self, other: &Self) -> Ordering {
        for w in (0..WORDS).rev() {
            match self.words[w].cmp(&other.words[w]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

/// Enumeration order used for every feature index: cardinality first, then
/// the numeric value of the bit pattern.
impl Ord for SubsetMask {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then(self.len().cmp(&other.len()))
            .then_with(|| self.cmp_numeric(other))
    }
}

impl PartialOrd for SubsetMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}/{}", self.n)
    }
}

#[derive(Serialize, Deserialize)]
struct MaskRepr {
    n: usize,
    elems: Vec<usize>,
}

impl Serialize for SubsetMask {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MaskRepr { n: self.n(), elems: self.elems() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubsetMask {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MaskRepr::deserialize(d)?;
        SubsetMask::from_elems(r.n, &r.elems).map_err(serde::de::Error::custom)
    }
}

/// All `2^n` subsets in numeric order. Requires `n ≤ MAX_EXHAUSTIVE_N`.
pub fn all_subsets(n: usize) -> Result<impl Iterator<Item = SubsetMask>> {
    if n > MAX_EXHAUSTIVE_N {
        return input(format!("exhaustive enumeration needs n <= {MAX_EXHAUSTIVE_N}, got {n}"));
    }
    Ok((0u64..1u64 << n).map(move |b| {
        let mut s = SubsetMask::empty(n);
        s.words[0] = b;
        s
    }))
}

/// `Σ_{L=lo..=hi} C(n, L)`, saturating.
pub fn count_subsets(n: usize, lo: usize, hi: usize) -> u128 {
    (lo..=hi.min(n)).map(|l| binomial(n, l)).fold(0u128, |a, b| a.saturating_add(b))
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Subsets of size in `lo..=hi`, in enumeration order (cardinality, then
/// numeric). The caller is responsible for guarding the count.
pub fn subsets_by_size(n: usize, lo: usize, hi: usize) -> Vec<SubsetMask> {
    let mut out = Vec::new();
    for size in lo..=hi.min(n) {
        // Colex order over index tuples equals numeric order of masks.
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let mut s = SubsetMask::empty(n);
            for &i in &idx {
                s.insert(i);
            }
            out.push(s);
            // advance colex: find the lowest position that can move up
            let mut p = 0;
            while p < size {
                let limit = if p + 1 < size { idx[p + 1] } else { n };
                if idx[p] + 1 < limit {
                    idx[p] += 1;
                    for (q, v) in idx.iter_mut().enumerate().take(p) {
                        *v = q;
                    }
                    break;
                }
                p += 1;
            }
            if p == size {
                break;
            }
        }
    }
    out
}
