//! Synthetic set-function families used as hidden targets, their ground-truth
//! evaluation, seeded generators and brute-force class verification.
//!
//! Generators draw from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`, so every instance is a pure function of its parameters and
//! seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::mask::{all_subsets, subsets_by_size, SubsetMask};

/// Schema version written into every function document.
pub const FUNCTION_SCHEMA_VERSION: u32 = 1;

/// Relative tolerance for comparing function values.
pub const VALUE_TOL: f64 = 1e-9;

/// `a ≤ b` up to relative tolerance [`VALUE_TOL`]; exact for integer-valued data.
#[inline]
pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b || (a - b) <= VALUE_TOL * a.abs().max(b.abs())
}

#[inline]
pub fn approx_eq(a: f64, b: f64) -> bool {
    approx_le(a, b) && approx_le(b, a)
}

/// Anything that can be evaluated on subsets of a fixed ground set.
pub trait SetFn: Sync {
    fn n(&self) -> usize;
    /// Value on `s`; callers guarantee `s.n() == self.n()`.
    fn value(&self, s: &SubsetMask) -> f64;
}

/// Wraps a closure as a [`SetFn`], handy for ad-hoc targets in tests.
pub struct FnSet<F> {
    pub n: usize,
    pub f: F,
}

impl<F: Fn(&SubsetMask) -> f64 + Sync> SetFn for FnSet<F> {
    fn n(&self) -> usize {
        self.n
    }
    fn value(&self, s: &SubsetMask) -> f64 {
        (self.f)(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageParams {
    pub universe_size: usize,
    /// One subset of the universe per ground-set element.
    pub item_sets: Vec<SubsetMask>,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XosParams {
    pub trees: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutParams {
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierParams {
    pub support: Vec<SubsetMask>,
    pub coeffs: Vec<f64>,
}

/// A weighted set used by interaction and DNF descriptions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedSet {
    pub set: SubsetMask,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionParams {
    pub degree: usize,
    /// Nonzero values of the interaction function `g`; `g(∅)` is fixed to 0.
    pub terms: Vec<WeightedSet>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum FunctionKind {
    Coverage(CoverageParams),
    Xos(XosParams),
    GraphCut(CutParams),
    FourierSparse(FourierParams),
    Interaction(InteractionParams),
    /// `κ·f₀(S) + (1−κ)·|S|`.
    CurvatureShift { base: Box<SetFunction>, kappa: f64 },
    /// `1` when `S` meets `support`, else `0`.
    Disjunction { support: SubsetMask },
    /// Pseudo-boolean DNF: the largest `value` among terms whose set is
    /// contained in `S` (0 when none is).
    KDnf { terms: Vec<WeightedSet> },
    /// `min(cap, f₀(S))`.
    Truncated { base: Box<SetFunction>, cap: f64 },
}

impl FunctionKind {
    pub fn tag(&self) -> &'static str {
        match self {
            FunctionKind::Coverage(_) => "coverage",
            FunctionKind::Xos(_) => "xos",
            FunctionKind::GraphCut(_) => "graph_cut",
            FunctionKind::FourierSparse(_) => "fourier_sparse",
            FunctionKind::Interaction(_) => "interaction",
            FunctionKind::CurvatureShift { .. } => "curvature_shift",
            FunctionKind::Disjunction { .. } => "disjunction",
            FunctionKind::KDnf { .. } => "k_dnf",
            FunctionKind::Truncated { .. } => "truncated",
        }
    }
}

/// An immutable, validated set function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetFunction {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub kind: FunctionKind,
}

#[derive(Serialize, Deserialize)]
struct FunctionDoc {
    schema_version: u32,
    #[serde(flatten)]
    function: SetFunction,
}

impl SetFunction {
    pub fn new(n: usize, kind: FunctionKind) -> Result<Self> {
        let f = SetFunction { n, seed: None, kind };
        f.validate()?;
        Ok(f)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 || n > crate::mask::MAX_N {
            return input(format!("ground set size {n} out of range"));
        }
        let check_width = |s: &SubsetMask, what: &str| -> Result<()> {
            if s.n() != n {
                return input(format!("{what} has width {} but n = {n}", s.n()));
            }
            Ok(())
        };
        match &self.kind {
            FunctionKind::Coverage(p) => {
                if p.universe_size == 0 {
                    return input("coverage universe must be nonempty");
                }
                if p.item_sets.len() != n {
                    return input(format!("coverage needs {n} item sets, got {}", p.item_sets.len()));
                }
                if p.weights.len() != p.universe_size {
                    return input("coverage weights must match the universe size");
                }
                if p.item_sets.iter().any(|s| s.n() != p.universe_size) {
                    return input("coverage item set width differs from universe size");
                }
                if p.weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
                    return input("coverage weights must be finite and nonnegative");
                }
            }
            FunctionKind::Xos(p) => {
                if p.trees.is_empty() {
                    return input("XOS needs at least one tree");
                }
                for t in &p.trees {
                    if t.len() != n {
                        return input("XOS tree length differs from n");
                    }
                    if t.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
                        return input("XOS weights must be finite and nonnegative");
                    }
                }
            }
            FunctionKind::GraphCut(p) => {
                for e in &p.edges {
                    if e.u >= n || e.v >= n || e.u == e.v {
                        return input(format!("bad edge ({}, {}) for n = {n}", e.u, e.v));
                    }
                    if !e.weight.is_finite() {
                        return input("edge weight must be finite");
                    }
                }
            }
            FunctionKind::FourierSparse(p) => {
                if p.support.len() != p.coeffs.len() {
                    return input("Fourier support and coefficient lengths differ");
                }
                for s in &p.support {
                    check_width(s, "Fourier support entry")?;
                }
                let mut sorted = p.support.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != p.support.len() {
                    return input("Fourier support entries must be distinct");
                }
            }
            FunctionKind::Interaction(p) => {
                for t in &p.terms {
                    check_width(&t.set, "interaction term")?;
                    if t.set.is_empty() || t.set.len() > p.degree {
                        return input(format!(
                            "interaction term {:?} must have cardinality in [1, {}]",
                            t.set, p.degree
                        ));
                    }
                }
            }
            FunctionKind::CurvatureShift { base, kappa } => {
                if !(0.0..=1.0).contains(kappa) {
                    return input(format!("curvature κ = {kappa} outside [0, 1]"));
                }
                if base.n != n {
                    return input("curvature base has a different ground set");
                }
                base.validate()?;
            }
            FunctionKind::Disjunction { support } => check_width(support, "disjunction support")?,
            FunctionKind::KDnf { terms } => {
                for t in terms {
                    check_width(&t.set, "DNF term")?;
                }
            }
            FunctionKind::Truncated { base, cap } => {
                if base.n != n {
                    return input("truncated base has a different ground set");
                }
                if !cap.is_finite() {
                    return input("truncation cap must be finite");
                }
                base.validate()?;
            }
        }
        Ok(())
    }

    /// Ground-truth value of `s`, rejecting masks of the wrong width.
    pub fn eval(&self, s: &SubsetMask) -> Result<f64> {
        if s.n() != self.n {
            return input(format!("mask of width {} evaluated on n = {}", s.n(), self.n));
        }
        Ok(self.value(s))
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = FunctionDoc { schema_version: FUNCTION_SCHEMA_VERSION, function: self.clone() };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: FunctionDoc = serde_json::from_str(text)?;
        if doc.schema_version != FUNCTION_SCHEMA_VERSION {
            return input(format!("unsupported function schema_version {}", doc.schema_version));
        }
        doc.function.validate()?;
        Ok(doc.function)
    }

    /// Full value table over all `2^n` subsets, indexed by bit pattern.
    pub fn table(&self) -> Result<Vec<f64>> {
        value_table(self)
    }
}

impl SetFn for SetFunction {
    fn n(&self) -> usize {
        self.n
    }

    fn value(&self, s: &SubsetMask) -> f64 {
        let v = match &self.kind {
            FunctionKind::Coverage(p) => {
                let mut covered = SubsetMask::empty(p.universe_size);
                for i in s.iter() {
                    covered = covered.union(&p.item_sets[i]);
                }
                covered.iter().map(|u| p.weights[u]).sum()
            }
            FunctionKind::Xos(p) => p
                .trees
                .iter()
                .map(|w| s.iter().map(|i| w[i]).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max),
            FunctionKind::GraphCut(p) => p
                .edges
                .iter()
                .filter(|e| s.contains(e.u) != s.contains(e.v))
                .map(|e| e.weight)
                .sum(),
            FunctionKind::FourierSparse(p) => p
                .support
                .iter()
                .zip(&p.coeffs)
                .map(|(t, c)| if t.intersection_len(s) % 2 == 0 { *c } else { -*c })
                .sum(),
            FunctionKind::Interaction(p) => {
                p.terms.iter().filter(|t| t.set.intersects(s)).map(|t| t.value).sum()
            }
            FunctionKind::CurvatureShift { base, kappa } => {
                kappa * base.value(s) + (1.0 - kappa) * s.len() as f64
            }
            FunctionKind::Disjunction { support } => {
                if support.intersects(s) {
                    1.0
                } else {
                    0.0
                }
            }
            FunctionKind::KDnf { terms } => terms
                .iter()
                .filter(|t| t.set.is_subset_of(s))
                .map(|t| t.value)
                .fold(0.0, f64::max),
            FunctionKind::Truncated { base, cap } => base.value(s).min(*cap),
        };
        // empty float sums are -0.0
        v + 0.0
    }
}

/// Values of `f` on all subsets, indexed by bit pattern (`n ≤ 63`, practically ≤ 24).
pub fn value_table<F: SetFn + ?Sized>(f: &F) -> Result<Vec<f64>> {
    if f.n() > 26 {
        return input(format!("value table for n = {} is too large", f.n()));
    }
    Ok(all_subsets(f.n())?.map(|s| f.value(&s)).collect())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw from `(0, 1]`.
fn unit_open_closed(r: &mut ChaCha8Rng) -> f64 {
    1.0 - r.gen::<f64>()
}

/// Random coverage function: item `i` covers universe element `u` with
/// probability `density`; weights uniform on `(0, 1]`.
pub fn gen_coverage(n: usize, universe_size: usize, density: f64, seed: u64) -> Result<SetFunction> {
    if !(density > 0.0 && density <= 1.0) {
        return input(format!(
            "coverage density must lie in (0, 1], got {density} (density 0 gives the all-zero function)"
        ));
    }
    if universe_size == 0 {
        return input("coverage universe size must be at least 1");
    }
    let mut r = rng(seed);
    let mut item_sets = Vec::with_capacity(n);
    for _ in 0..n {
        let mut s = SubsetMask::try_empty(universe_size)?;
        for u in 0..universe_size {
            if r.gen::<f64>() < density {
                s.insert(u);
            }
        }
        item_sets.push(s);
    }
    let weights = (0..universe_size).map(|_| unit_open_closed(&mut r)).collect();
    Ok(SetFunction::new(n, FunctionKind::Coverage(CoverageParams { universe_size, item_sets, weights }))?
        .with_seed(seed))
}

/// Coverage function from explicit item sets (given as universe element lists).
pub fn coverage_from_sets(universe_size: usize, items: &[&[usize]], weights: Vec<f64>) -> Result<SetFunction> {
    let item_sets =
        items.iter().map(|e| SubsetMask::from_elems(universe_size, e)).collect::<Result<Vec<_>>>()?;
    SetFunction::new(items.len(), FunctionKind::Coverage(CoverageParams { universe_size, item_sets, weights }))
}

impl SetFunction {
    /// Coverage with every universe weight replaced by 1 (integer-valued).
    pub fn with_unit_weights(mut self) -> Result<Self> {
        match &mut self.kind {
            FunctionKind::Coverage(p) => p.weights.iter_mut().for_each(|w| *w = 1.0),
            _ => return input("unit weights apply to coverage functions only"),
        }
        Ok(self)
    }

    /// Coverage rescaled so that the full ground set has value 1.
    pub fn normalized(mut self) -> Result<Self> {
        let full = self.value(&SubsetMask::full(self.n));
        match &mut self.kind {
            FunctionKind::Coverage(p) if full > 0.0 => p.weights.iter_mut().for_each(|w| *w /= full),
            FunctionKind::Coverage(_) => return input("cannot normalize a zero coverage function"),
            _ => return input("normalization applies to coverage functions only"),
        }
        Ok(self)
    }
}

/// XOS function with `trees` nonnegative linear trees, weights uniform on `[0, 1)`.
pub fn gen_xos(n: usize, trees: usize, seed: u64) -> Result<SetFunction> {
    if trees == 0 {
        return input("XOS needs at least one tree");
    }
    let mut r = rng(seed);
    let trees = (0..trees).map(|_| (0..n).map(|_| r.gen::<f64>()).collect()).collect();
    Ok(SetFunction::new(n, FunctionKind::Xos(XosParams { trees }))?.with_seed(seed))
}

/// Modular function `w·χ(S)` (a one-tree XOS function).
pub fn modular(weights: Vec<f64>) -> Result<SetFunction> {
    let n = weights.len();
    SetFunction::new(n, FunctionKind::Xos(XosParams { trees: vec![weights] }))
}

/// Erdős–Rényi graph with unit edge weights; cut value counts crossing edges.
pub fn gen_graph_cut(n: usize, edge_prob: f64, seed: u64) -> Result<SetFunction> {
    if !(0.0..=1.0).contains(&edge_prob) {
        return input("edge probability must lie in [0, 1]");
    }
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen::<f64>() < edge_prob {
                edges.push(Edge { u, v, weight: 1.0 });
            }
        }
    }
    Ok(SetFunction::new(n, FunctionKind::GraphCut(CutParams { edges }))?.with_seed(seed))
}

/// Unit-weight path graph on `n` vertices.
pub fn path_cut(n: usize) -> Result<SetFunction> {
    let edges = (0..n.saturating_sub(1)).map(|u| Edge { u, v: u + 1, weight: 1.0 }).collect();
    SetFunction::new(n, FunctionKind::GraphCut(CutParams { edges }))
}

/// Fourier expansion of a cut function: `f̂(∅) = Σ w/2`, `f̂({u,v}) = −w/2`.
pub fn cut_to_fourier(f: &SetFunction) -> Result<SetFunction> {
    let FunctionKind::GraphCut(p) = &f.kind else {
        return input("cut_to_fourier needs a graph cut function");
    };
    let n = f.n;
    let mut support = vec![SubsetMask::empty(n)];
    let mut coeffs = vec![p.edges.iter().map(|e| e.weight).sum::<f64>() / 2.0];
    for e in &p.edges {
        let t = SubsetMask::from_elems(n, &[e.u, e.v])?;
        match support.iter().position(|s| *s == t) {
            Some(k) => coeffs[k] -= e.weight / 2.0,
            None => {
                support.push(t);
                coeffs.push(-e.weight / 2.0);
            }
        }
    }
    let mut out = SetFunction::new(n, FunctionKind::FourierSparse(FourierParams { support, coeffs }))?;
    out.seed = f.seed;
    Ok(out)
}

/// Interaction function of degree `k`: every nonempty `T` with `|T| ≤ k`
/// receives `g(T)` uniform on `(0, 1]`.
pub fn gen_interaction(n: usize, k: usize, seed: u64) -> Result<SetFunction> {
    if k == 0 || k > n {
        return input(format!("interaction degree must lie in [1, n], got {k}"));
    }
    let count = crate::mask::count_subsets(n, 1, k);
    if count > 5_000_000 {
        return Err(Error::Capacity { what: "interaction terms".into(), dim: count, limit: 5_000_000 });
    }
    let mut r = rng(seed);
    let terms = subsets_by_size(n, 1, k)
        .into_iter()
        .map(|set| WeightedSet { set, value: unit_open_closed(&mut r) })
        .collect();
    Ok(SetFunction::new(n, FunctionKind::Interaction(InteractionParams { degree: k, terms }))?.with_seed(seed))
}

/// `κ·f₀(S) + (1−κ)·|S|`.
pub fn curvature_shift(base: SetFunction, kappa: f64) -> Result<SetFunction> {
    let n = base.n;
    let seed = base.seed;
    let mut f = SetFunction::new(n, FunctionKind::CurvatureShift { base: Box::new(base), kappa })?;
    f.seed = seed;
    Ok(f)
}

pub fn truncate(base: SetFunction, cap: f64) -> Result<SetFunction> {
    let n = base.n;
    let seed = base.seed;
    let mut f = SetFunction::new(n, FunctionKind::Truncated { base: Box::new(base), cap })?;
    f.seed = seed;
    Ok(f)
}

pub fn disjunction(n: usize, support: &[usize]) -> Result<SetFunction> {
    SetFunction::new(n, FunctionKind::Disjunction { support: SubsetMask::from_elems(n, support)? })
}

/// Disjunction whose support includes each element with probability 1/2.
pub fn gen_disjunction(n: usize, seed: u64) -> Result<SetFunction> {
    let mut r = rng(seed);
    let support: Vec<usize> = (0..n).filter(|_| r.gen::<bool>()).collect();
    Ok(disjunction(n, &support)?.with_seed(seed))
}

/// Random pseudo-boolean DNF with `terms` terms over sets of size `1..=2k`,
/// each carrying an integer value in `1..=k`.
pub fn gen_kdnf(n: usize, k: usize, terms: usize, seed: u64) -> Result<SetFunction> {
    if k == 0 {
        return input("k must be positive");
    }
    let mut r = rng(seed);
    let elems: Vec<usize> = (0..n).collect();
    let max_size = (2 * k).min(n);
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let size = r.gen_range(1..=max_size);
        let chosen: Vec<usize> = elems.choose_multiple(&mut r, size).copied().collect();
        let value = r.gen_range(1..=k) as f64;
        out.push(WeightedSet { set: SubsetMask::from_elems(n, &chosen)?, value });
    }
    Ok(SetFunction::new(n, FunctionKind::KDnf { terms: out })?.with_seed(seed))
}

/// Class properties checkable by brute force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassProperty {
    Monotone,
    Submodular,
    Subadditive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Sampled { trials: usize, seed: u64 },
}

/// Largest ground set accepted by [`CheckMode::Exhaustive`].
pub const MAX_VERIFY_N: usize = 14;

/// Sets that violate the defining inequality.
///
/// * monotone: `f(a) > f(b)` with `b = a ∪ {elem}`.
/// * submodular: `a ⊆ b`, `elem ∉ b`, marginal of `elem` at `b` exceeds its marginal at `a`.
/// * subadditive: `f(a ∪ b) > f(a) + f(b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub a: SubsetMask,
    pub b: SubsetMask,
    pub elem: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Verdict {
    Pass,
    Fail(Witness),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

pub fn verify_class<F: SetFn + ?Sized>(f: &F, property: ClassProperty, mode: CheckMode) -> Result<Verdict> {
    let n = f.n();
    match mode {
        CheckMode::Exhaustive => {
            if n > MAX_VERIFY_N {
                return input(format!(
                    "exhaustive verification needs n <= {MAX_VERIFY_N}, got {n}; request sampled mode"
                ));
            }
            let table = value_table(f)?;
            Ok(exhaustive(n, &table, property))
        }
        CheckMode::Sampled { trials, seed } => Ok(sampled(f, property, trials, seed)),
    }
}

fn mask(n: usize, bits: u64) -> SubsetMask {
    SubsetMask::from_bits(n, bits).expect("bits within n")
}

fn exhaustive(n: usize, t: &[f64], property: ClassProperty) -> Verdict {
    let full: u64 = (1u64 << n) - 1;
    match property {
        ClassProperty::Monotone => {
            for s in 0..=full {
                for i in 0..n {
                    let bit = 1u64 << i;
                    if s & bit == 0 && !approx_le(t[s as usize], t[(s | bit) as usize]) {
                        return Verdict::Fail(Witness { a: mask(n, s), b: mask(n, s | bit), elem: Some(i) });
                    }
                }
            }
        }
        ClassProperty::Submodular => {
            for big in 0..=full {
                // every subset `small` of `big`
                let mut small = big;
                loop {
                    for i in 0..n {
                        let bit = 1u64 << i;
                        if big & bit != 0 {
                            continue;
                        }
                        let gain_small = t[(small | bit) as usize] - t[small as usize];
                        let gain_big = t[(big | bit) as usize] - t[big as usize];
                        if !approx_le(gain_big, gain_small) {
                            return Verdict::Fail(Witness {
                                a: mask(n, small),
                                b: mask(n, big),
                                elem: Some(i),
                            });
                        }
                    }
                    if small == 0 {
                        break;
                    }
                    small = (small - 1) & big;
                }
            }
        }
        ClassProperty::Subadditive => {
            for a in 0..=full {
                for b in 0..=full {
                    if !approx_le(t[(a | b) as usize], t[a as usize] + t[b as usize]) {
                        return Verdict::Fail(Witness { a: mask(n, a), b: mask(n, b), elem: None });
                    }
                }
            }
        }
    }
    Verdict::Pass
}

fn random_mask(n: usize, r: &mut ChaCha8Rng) -> SubsetMask {
    let mut s = SubsetMask::empty(n);
    for i in 0..n {
        if r.gen::<bool>() {
            s.insert(i);
        }
    }
    s
}

fn sampled<F: SetFn + ?Sized>(f: &F, property: ClassProperty, trials: usize, seed: u64) -> Verdict {
    let n = f.n();
    let mut r = rng(seed);
    for _ in 0..trials {
        let a = random_mask(n, &mut r);
        let extra = random_mask(n, &mut r);
        match property {
            ClassProperty::Monotone | ClassProperty::Submodular if n > 0 => {
                let i = r.gen_range(0..n);
                let b = a.union(&extra);
                if property == ClassProperty::Monotone {
                    let mut lo = a;
                    lo.remove(i);
                    let hi = lo.with(i);
                    if !approx_le(f.value(&lo), f.value(&hi)) {
                        return Verdict::Fail(Witness { a: lo, b: hi, elem: Some(i) });
                    }
                } else {
                    let mut small = a;
                    let mut big = b;
                    small.remove(i);
                    big.remove(i);
                    let gain_small = f.value(&small.with(i)) - f.value(&small);
                    let gain_big = f.value(&big.with(i)) - f.value(&big);
                    if !approx_le(gain_big, gain_small) {
                        return Verdict::Fail(Witness { a: small, b: big, elem: Some(i) });
                    }
                }
            }
            ClassProperty::Subadditive if !approx_le(f.value(&a.union(&extra)), f.value(&a) + f.value(&extra)) => {
                return Verdict::Fail(Witness { a, b: extra, elem: None });
            }
            _ => {}
        }
    }
    Verdict::Pass
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::fixtures::cov3;

    fn m(n: usize, e: &[usize]) -> SubsetMask {
        SubsetMask::from_elems(n, e).unwrap()
    }

    #[test]
    fn cov3_table_by_hand() {
        let f = cov3();
        // bit pattern → hand-computed union weight
        let expected = [0.0, 1.0, 1.0, 2.0, 3.0, 3.0, 3.0, 3.0];
        assert_eq!(f.table().unwrap(), expected);
        assert_eq!(f.eval(&m(3, &[2])).unwrap(), 3.0);
        assert_eq!(f.eval(&m(3, &[])).unwrap(), 0.0);
    }

    #[test]
    fn eval_rejects_wide_mask() {
        assert!(matches!(cov3().eval(&m(4, &[0])), Err(Error::Input(_))));
    }

    #[test]
    fn path_cut_and_its_fourier_form() {
        let cut = path_cut(3).unwrap();
        assert_eq!(cut.eval(&m(3, &[1])).unwrap(), 2.0);
        let four = SetFunction::new(
            3,
            FunctionKind::FourierSparse(FourierParams {
                support: vec![m(3, &[]), m(3, &[0, 1]), m(3, &[1, 2])],
                coeffs: vec![1.0, -0.5, -0.5],
            }),
        )
        .unwrap();
        assert_eq!(four.eval(&m(3, &[1])).unwrap(), 2.0);
        assert_eq!(four.table().unwrap(), cut.table().unwrap());
        assert_eq!(cut_to_fourier(&cut).unwrap(), four);
    }

    #[test]
    fn fourier_support_must_be_distinct() {
        let r = SetFunction::new(
            3,
            FunctionKind::FourierSparse(FourierParams {
                support: vec![m(3, &[0]), m(3, &[0])],
                coeffs: vec![1.0, 1.0],
            }),
        );
        assert!(r.is_err());
    }

    #[test]
    fn coverage_single_element_universe() {
        let f = gen_coverage(3, 1, 1.0, 11).unwrap();
        let FunctionKind::Coverage(p) = &f.kind else { unreachable!() };
        let w = p.weights[0];
        assert!(w > 0.0 && w <= 1.0);
        for s in all_subsets(3).unwrap() {
            let expect = if s.is_empty() { 0.0 } else { w };
            assert_eq!(f.value(&s), expect);
        }
    }

    #[test]
    fn coverage_rejects_zero_density() {
        let e = gen_coverage(5, 10, 0.0, 1).unwrap_err();
        assert!(e.to_string().contains("density"));
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(gen_coverage(12, 40, 0.2, 9).unwrap(), gen_coverage(12, 40, 0.2, 9).unwrap());
        assert_ne!(gen_coverage(12, 40, 0.2, 9).unwrap(), gen_coverage(12, 40, 0.2, 10).unwrap());
        assert_eq!(gen_kdnf(6, 2, 5, 3).unwrap(), gen_kdnf(6, 2, 5, 3).unwrap());
    }

    #[test]
    fn generated_coverage_is_submodular() {
        let f = gen_coverage(12, 40, 0.2, 7).unwrap();
        assert!(verify_class(&f, ClassProperty::Submodular, CheckMode::Exhaustive).unwrap().passed());
        assert!(verify_class(&f, ClassProperty::Monotone, CheckMode::Exhaustive).unwrap().passed());
    }

    #[test]
    fn curvature_shift_limits() {
        let base = cov3();
        let zero = curvature_shift(base.clone(), 0.0).unwrap();
        let one = curvature_shift(base.clone(), 1.0).unwrap();
        let half = curvature_shift(base.clone(), 0.5).unwrap();
        for s in all_subsets(3).unwrap() {
            assert_eq!(zero.value(&s), s.len() as f64);
            assert_eq!(one.value(&s), base.value(&s));
        }
        assert_eq!(half.value(&m(3, &[2])), 2.0);
        assert!(curvature_shift(base.clone(), 1.5).is_err());
        assert!(curvature_shift(base, -0.1).is_err());
    }

    #[test]
    fn verify_examples() {
        assert!(verify_class(&cov3(), ClassProperty::Submodular, CheckMode::Exhaustive).unwrap().passed());
        let square = FnSet { n: 3, f: |s: &SubsetMask| (s.len() * s.len()) as f64 };
        match verify_class(&square, ClassProperty::Subadditive, CheckMode::Exhaustive).unwrap() {
            Verdict::Fail(w) => {
                // first violation in enumeration order: {0} ∪ {1} → 4 > 1 + 1
                assert_eq!(w.a, m(3, &[0]));
                assert_eq!(w.b, m(3, &[1]));
            }
            Verdict::Pass => panic!("|S|^2 is not subadditive"),
        }
        let card = FnSet { n: 3, f: |s: &SubsetMask| s.len() as f64 };
        assert!(verify_class(&card, ClassProperty::Monotone, CheckMode::Exhaustive).unwrap().passed());
    }

    #[test]
    fn verify_refuses_large_exhaustive() {
        let f = gen_coverage(20, 10, 0.3, 1).unwrap();
        assert!(verify_class(&f, ClassProperty::Monotone, CheckMode::Exhaustive).is_err());
        let v = verify_class(&f, ClassProperty::Submodular, CheckMode::Sampled { trials: 2000, seed: 3 }).unwrap();
        assert!(v.passed());
    }

    #[test]
    fn sampled_mode_finds_supermodularity() {
        let square = FnSet { n: 10, f: |s: &SubsetMask| (s.len() * s.len()) as f64 };
        let v = verify_class(&square, ClassProperty::Submodular, CheckMode::Sampled { trials: 500, seed: 1 })
            .unwrap();
        assert!(!v.passed());
    }

    #[test]
    fn interaction_degree_one_is_modular() {
        let f = gen_interaction(8, 1, 4).unwrap();
        let t = f.table().unwrap();
        for i in 0..8 {
            let bit = 1usize << i;
            let base = t[bit] - t[0];
            for s in 0..256usize {
                if s & bit == 0 {
                    assert!(approx_eq(t[s | bit] - t[s], base));
                }
            }
        }
    }

    #[test]
    fn kdnf_semantics() {
        let f = SetFunction::new(
            3,
            FunctionKind::KDnf {
                terms: vec![
                    WeightedSet { set: m(3, &[0]), value: 2.0 },
                    WeightedSet { set: m(3, &[1]), value: 1.0 },
                ],
            },
        )
        .unwrap();
        assert_eq!(f.value(&m(3, &[0, 2])), 2.0);
        assert_eq!(f.value(&m(3, &[1])), 1.0);
        assert_eq!(f.value(&m(3, &[2])), 0.0);
        assert_eq!(f.value(&m(3, &[0, 1])), 2.0);
    }

    #[test]
    fn json_round_trip_and_schema_guard() {
        let f = curvature_shift(gen_coverage(5, 8, 0.4, 2).unwrap(), 0.3).unwrap();
        let text = f.to_json().unwrap();
        assert!(text.contains("\"schema_version\": 1"));
        assert!(text.contains("\"kind\": \"curvature_shift\""));
        assert_eq!(SetFunction::from_json(&text).unwrap(), f);
        let bumped = text.replace("\"schema_version\": 1", "\"schema_version\": 99");
        assert!(SetFunction::from_json(&bumped).is_err());
    }

    #[test]
    fn normalized_coverage_has_unit_top() {
        let f = gen_coverage(10, 30, 0.2, 5).unwrap().normalized().unwrap();
        assert!((f.value(&SubsetMask::full(10)) - 1.0).abs() < 1e-12);
    }
}
