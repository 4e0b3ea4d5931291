//! Feature maps under which each target class admits a (near-)linear score.
//!
//! Every map indexes its features by a list of subsets `T` in the fixed
//! enumeration order of [`SubsetMask`]'s `Ord` (cardinality, then numeric bit
//! pattern). The order is part of the serialized descriptor via
//! [`ENUMERATION_VERSION`].

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::mask::{count_subsets, subsets_by_size, SubsetMask};

pub const ENUMERATION_VERSION: &str = "card-lex-v1";

/// Largest feature dimension accepted for the subset-indexed maps.
pub const MAX_DIM: u128 = 5_000_000;
/// Largest ground set accepted by the OR-indicator map (`2^n − 1` features).
pub const MAX_OR_N: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "by", rename_all = "snake_case")]
pub enum ParitySpec {
    Degree { k: usize },
    Support { sets: Vec<SubsetMask> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MapKind {
    /// `χ(S) ∈ {0,1}^n`.
    Characteristic,
    /// `1[T ⊆ S]` for every `|T| ≤ k`, including the constant `T = ∅`.
    Monomial { k: usize },
    /// `1[T ∩ S ≠ ∅]` for every `1 ≤ |T| ≤ k`.
    Intersect { k: usize },
    /// `(−1)^{|T ∩ S|}` over a degree bound or an explicit support.
    Parity(ParitySpec),
    /// `OR_T(S) = 1[T ∩ S ≠ ∅]` for every nonempty `T`.
    OrIndicator,
}

/// Serialized form: the kind plus ground-set size and enumeration tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapDescriptor {
    pub kind: MapKind,
    pub n: usize,
    pub dim: usize,
    pub enumeration: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    kind: MapKind,
    n: usize,
    /// Index sets `T` for subset-indexed maps; empty for `Characteristic`.
    index: Vec<SubsetMask>,
}

fn capacity(what: &str, dim: u128, limit: u128) -> Error {
    Error::Capacity { what: what.to_string(), dim, limit }
}

impl FeatureMap {
    pub fn new(kind: MapKind, n: usize) -> Result<Self> {
        if n == 0 || n > crate::mask::MAX_N {
            return input(format!("ground set size {n} out of range"));
        }
        let index = match &kind {
            MapKind::Characteristic => Vec::new(),
            MapKind::Monomial { k } => Self::bounded(n, 0, *k, "monomial features")?,
            MapKind::Intersect { k } => {
                if *k == 0 {
                    return input("intersect features need k >= 1");
                }
                Self::bounded(n, 1, *k, "intersect features")?
            }
            MapKind::Parity(ParitySpec::Degree { k }) => Self::bounded(n, 0, *k, "parity features")?,
            MapKind::Parity(ParitySpec::Support { sets }) => {
                if sets.is_empty() {
                    return input("parity support must be nonempty");
                }
                if let Some(s) = sets.iter().find(|s| s.n() != n) {
                    return input(format!("parity support entry {s:?} does not fit n = {n}"));
                }
                let mut sorted = sets.clone();
                sorted.sort();
                sorted.dedup();
                sorted
            }
            MapKind::OrIndicator => {
                if n > MAX_OR_N {
                    let dim = if n < 127 { (1u128 << n) - 1 } else { u128::MAX };
                    return Err(capacity("OR-indicator features", dim, (1u128 << MAX_OR_N) - 1));
                }
                subsets_by_size(n, 1, n)
            }
        };
        Ok(Self { kind, n, index })
    }

    fn bounded(n: usize, lo: usize, k: usize, what: &str) -> Result<Vec<SubsetMask>> {
        if k > n {
            return input(format!("{what}: degree {k} exceeds n = {n}"));
        }
        let dim = count_subsets(n, lo, k);
        if dim > MAX_DIM {
            return Err(capacity(what, dim, MAX_DIM));
        }
        Ok(subsets_by_size(n, lo, k))
    }

    pub fn characteristic(n: usize) -> Result<Self> {
        Self::new(MapKind::Characteristic, n)
    }

    pub fn parity_degree(n: usize, k: usize) -> Result<Self> {
        Self::new(MapKind::Parity(ParitySpec::Degree { k }), n)
    }

    pub fn parity_support(n: usize, sets: Vec<SubsetMask>) -> Result<Self> {
        Self::new(MapKind::Parity(ParitySpec::Support { sets }), n)
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            MapKind::Characteristic => self.n,
            _ => self.index.len(),
        }
    }

    /// Subset indexing feature `i` (`{i}` for the characteristic map).
    pub fn feature_set(&self, i: usize) -> SubsetMask {
        match self.kind {
            MapKind::Characteristic => SubsetMask::empty(self.n).with(i),
            _ => self.index[i],
        }
    }

    pub fn index_of(&self, t: &SubsetMask) -> Option<usize> {
        match self.kind {
            MapKind::Characteristic => (t.len() == 1).then(|| t.iter().next().unwrap()),
            _ => self.index.binary_search(t).ok(),
        }
    }

    pub fn embed(&self, s: &SubsetMask) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.embed_into(s, &mut out)?;
        Ok(out)
    }

    pub fn embed_into(&self, s: &SubsetMask, out: &mut [f64]) -> Result<()> {
        if s.n() != self.n {
            return input(format!("mask of width {} embedded with n = {}", s.n(), self.n));
        }
        if out.len() != self.dim() {
            return input(format!("output buffer of length {} for dim {}", out.len(), self.dim()));
        }
        let bit = |b: bool| if b { 1.0 } else { 0.0 };
        match &self.kind {
            MapKind::Characteristic => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = bit(s.contains(i));
                }
            }
            MapKind::Monomial { .. } => {
                for (t, o) in self.index.iter().zip(out.iter_mut()) {
                    *o = bit(t.is_subset_of(s));
                }
            }
            MapKind::Intersect { .. } | MapKind::OrIndicator => {
                for (t, o) in self.index.iter().zip(out.iter_mut()) {
                    *o = bit(t.intersects(s));
                }
            }
            MapKind::Parity(_) => {
                for (t, o) in self.index.iter().zip(out.iter_mut()) {
                    *o = if t.intersection_len(s) % 2 == 0 { 1.0 } else { -1.0 };
                }
            }
        }
        Ok(())
    }

    pub fn descriptor(&self) -> MapDescriptor {
        MapDescriptor {
            kind: self.kind.clone(),
            n: self.n,
            dim: self.dim(),
            enumeration: ENUMERATION_VERSION.to_string(),
        }
    }

    pub fn from_descriptor(d: &MapDescriptor) -> Result<Self> {
        if d.enumeration != ENUMERATION_VERSION {
            return input(format!("unknown feature enumeration {:?}", d.enumeration));
        }
        let map = Self::new(d.kind.clone(), d.n)?;
        if map.dim() != d.dim {
            return input(format!("descriptor dim {} disagrees with rebuilt dim {}", d.dim, map.dim()));
        }
        Ok(map)
    }
}

impl Serialize for FeatureMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.descriptor().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FeatureMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let desc = MapDescriptor::deserialize(d)?;
        FeatureMap::from_descriptor(&desc).map_err(serde::de::Error::custom)
    }
}

/// `{∅} ∪ {T : |T| = 2}`, the Fourier support of every graph cut function.
pub fn cut_support(n: usize) -> Vec<SubsetMask> {
    let mut v = vec![SubsetMask::empty(n)];
    v.extend(subsets_by_size(n, 2, 2));
    v
}

/// Function classes with a known feature map and separation factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ClassTag {
    /// Exactly linear in `χ(S)`; separation 1.
    Modular,
    Submodular,
    /// XOS with separation `c·√n`.
    Xos { c: f64 },
    Subadditive,
    /// Submodular with curvature at most `kappa`.
    Curvature { kappa: f64 },
    /// XOS with `trees` SUM trees, traded off by `xi > 0`.
    XosTrees { trees: usize, xi: f64 },
    /// Interaction functions of degree at most `k` (the class `F_k`).
    Interaction { k: usize },
    /// Fourier support contained in `support`.
    FourierSparse { support: Vec<SubsetMask> },
    /// Graph cut functions: Fourier-sparse over `{∅} ∪ pairs`.
    GraphCut,
    /// Coverage with the OR-indicator basis and separation `1 + eps`.
    Coverage { eps: f64 },
}

/// Feature map and declared multiplicative separation for a class.
pub fn select_map(class: &ClassTag, n: usize) -> Result<(FeatureMap, f64)> {
    let nf = n as f64;
    let sqrt_n = nf.sqrt();
    Ok(match class {
        ClassTag::Modular => (FeatureMap::characteristic(n)?, 1.0),
        ClassTag::Submodular => (FeatureMap::characteristic(n)?, sqrt_n),
        ClassTag::Xos { c } => {
            if !(*c > 0.0) {
                return input("XOS separation constant must be positive");
            }
            (FeatureMap::characteristic(n)?, c * sqrt_n)
        }
        ClassTag::Subadditive => (FeatureMap::characteristic(n)?, sqrt_n * nf.ln().max(1.0)),
        ClassTag::Curvature { kappa } => {
            if !(0.0..=1.0).contains(kappa) {
                return input(format!("curvature κ = {kappa} outside [0, 1]"));
            }
            let flat = if *kappa < 1.0 { 1.0 / (1.0 - kappa) } else { f64::INFINITY };
            (FeatureMap::characteristic(n)?, sqrt_n.min(flat))
        }
        ClassTag::XosTrees { trees, xi } => {
            if *trees == 0 || !(*xi > 0.0) {
                return input("XOS-with-trees needs trees >= 1 and xi > 0");
            }
            let k = ((1.0 / xi).ceil() as usize).min(n);
            (FeatureMap::new(MapKind::Monomial { k }, n)?, (*trees as f64).powf(*xi))
        }
        ClassTag::Interaction { k } => (FeatureMap::new(MapKind::Intersect { k: *k }, n)?, 1.0),
        ClassTag::FourierSparse { support } => (FeatureMap::parity_support(n, support.clone())?, 1.0),
        ClassTag::GraphCut => (FeatureMap::parity_support(n, cut_support(n))?, 1.0),
        ClassTag::Coverage { eps } => {
            if !(*eps > 0.0) {
                return input("coverage eps must be positive");
            }
            (FeatureMap::new(MapKind::OrIndicator, n)?, 1.0 + eps)
        }
    })
}
