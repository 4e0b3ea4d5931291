//! Landmark-based comparator learning.
//!
//! Both pipelines share one skeleton: draw `m` landmarks and a training
//! sample, oracle-sort the landmarks, locate the training sets among them, fit
//! one linear separator per landmark pair `(i, j)` that splits
//! `{S : f(S) ≤ f(L_i)}` from `{S : f(S) ≥ f(L_j)}`, keep the pairs that pass
//! and prune them to the minimal ones. The multiplicative pipeline keeps a
//! pair when the split is exactly realizable; the additive pipeline keeps it
//! when the honest training error over the whole training set is at most
//! `ε / (4m²)`.
//!
//! Samples tied with both landmarks of a pair are labelled negative (ties
//! count as `≤`). Repeated training sets are located once and carried with
//! their multiplicity. All logarithms are natural.

use std::collections::HashMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::featmap::{FeatureMap, MAX_DIM};
use crate::mask::{count_subsets, SubsetMask};
use crate::oracle::{ComparisonOracle, LandmarkPosition};
use crate::septrain::{
    count_mistakes, train_realizable, train_tolerant_weighted, Label, LabeledSample, LinearSeparator, Realizable,
    TolerantConfig,
};
use crate::setfn::SetFn;

pub const COMPARATOR_SCHEMA_VERSION: u32 = 1;

/// Largest training set the size formulas may request.
pub const MAX_TRAIN_SIZE: f64 = 5e7;

/// Distribution over subsets that training and evaluation samples come from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SampleDistribution {
    /// Uniform over `2^[n]`.
    #[default]
    Uniform,
    /// Each element included independently with probability `p`.
    Product { p: f64 },
}

impl SampleDistribution {
    pub fn validate(&self) -> Result<()> {
        match self {
            SampleDistribution::Uniform => Ok(()),
            SampleDistribution::Product { p } if (0.0..=1.0).contains(p) => Ok(()),
            SampleDistribution::Product { p } => input(format!("inclusion probability {p} outside [0, 1]")),
        }
    }

    pub fn sample<R: Rng>(&self, n: usize, rng: &mut R) -> SubsetMask {
        let mut s = SubsetMask::empty(n);
        match *self {
            SampleDistribution::Uniform => {
                for i in 0..n {
                    if rng.gen::<bool>() {
                        s.insert(i);
                    }
                }
            }
            SampleDistribution::Product { p } => {
                for i in 0..n {
                    if rng.gen::<f64>() < p {
                        s.insert(i);
                    }
                }
            }
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Mode {
    /// Errors are tolerated only between values within a factor `alpha`.
    Multiplicative { alpha: f64 },
    /// Errors are tolerated only between values within `beta` additively;
    /// Fourier features of degree `min(k, degree_cap)`.
    Additive { beta: f64, degree_cap: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub eps: f64,
    pub delta: f64,
    pub mode: Mode,
    /// Overrides the landmark count `m`.
    #[serde(default)]
    pub landmarks: Option<usize>,
    /// Overrides the training-set size `|S₂|`.
    #[serde(default)]
    pub train_size: Option<usize>,
    /// Multiplies the training-set size formula.
    pub sample_constant: f64,
    /// Train only adjacent landmark pairs `(i, i+1)`.
    #[serde(default)]
    pub adjacent_only: bool,
    pub seed: u64,
}

impl TrainConfig {
    pub fn multiplicative(eps: f64, delta: f64, alpha: f64, seed: u64) -> Self {
        Self {
            eps,
            delta,
            mode: Mode::Multiplicative { alpha },
            landmarks: None,
            train_size: None,
            sample_constant: 1.0,
            adjacent_only: false,
            seed,
        }
    }

    pub fn additive(eps: f64, delta: f64, beta: f64, degree_cap: Option<usize>, seed: u64) -> Self {
        Self { mode: Mode::Additive { beta, degree_cap }, ..Self::multiplicative(eps, delta, 1.0, seed) }
    }

    pub fn with_landmarks(mut self, m: usize) -> Self {
        self.landmarks = Some(m);
        self
    }

    pub fn with_train_size(mut self, size: usize) -> Self {
        self.train_size = Some(size);
        self
    }

    pub fn adjacent(mut self) -> Self {
        self.adjacent_only = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| v > 0.0 && v < 1.0;
        if !unit(self.eps) || !unit(self.delta) {
            return input(format!("eps = {} and delta = {} must lie in (0, 1)", self.eps, self.delta));
        }
        match self.mode {
            Mode::Multiplicative { alpha } if !(alpha >= 1.0) => {
                return input(format!("multiplicative separation {alpha} must be >= 1"))
            }
            Mode::Additive { beta, .. } if !unit(beta) => {
                return input(format!("additive separation {beta} must lie in (0, 1)"))
            }
            Mode::Additive { degree_cap: Some(0), .. } => return input("degree cap must be positive"),
            _ => {}
        }
        if self.landmarks == Some(0) {
            return input("landmark count must be positive");
        }
        if self.train_size == Some(0) {
            return input("training set size must be positive");
        }
        if !(self.sample_constant > 0.0) {
            return input("sample constant must be positive");
        }
        Ok(())
    }
}

/// `m = ⌈(2/ε)·ln(1/(εδ))⌉`, at least 1.
pub fn landmark_count(eps: f64, delta: f64) -> usize {
    ((2.0 / eps) * (1.0 / (eps * delta)).ln()).ceil().max(1.0) as usize
}

/// `⌈c₀·(m²/ε)·(d·ln(m²/ε) + ln(1/δ))⌉` for the realizable pipeline.
pub fn multiplicative_train_size(m: usize, eps: f64, delta: f64, dim: usize, c0: f64) -> f64 {
    let m2 = (m * m) as f64;
    (c0 * (m2 / eps) * (dim as f64 * (m2 / eps).ln().max(0.0) + (1.0 / delta).ln())).ceil()
}

/// `⌈c₀·(m²/ε²)·(d·ln(m²/ε) + ln(1/δ))⌉` for the agnostic pipeline.
pub fn additive_train_size(m: usize, eps: f64, delta: f64, dim: usize, c0: f64) -> f64 {
    let m2 = (m * m) as f64;
    (c0 * (m2 / (eps * eps)) * (dim as f64 * (m2 / eps).ln().max(0.0) + (1.0 / delta).ln())).ceil()
}

/// `γ = β·(1 + (2/ε)·ln(1/(εδ))·√(2/ε))⁻¹`.
pub fn additive_gamma(beta: f64, eps: f64, delta: f64) -> f64 {
    beta / (1.0 + (2.0 / eps) * (1.0 / (eps * delta)).ln() * (2.0 / eps).sqrt())
}

/// `k = (25/γ^{4/5})·ln(2^{1/3}/γ)` before rounding up.
pub fn additive_degree(gamma: f64) -> f64 {
    25.0 / gamma.powf(0.8) * (2f64.cbrt() / gamma).ln()
}

/// Keeps the pairs that do not contain another accepted pair: `(i, j)` is
/// dropped when some distinct `(i′, j′)` has `i ≤ i′` and `j ≥ j′`.
/// Output is sorted ascending.
pub fn prune_minimal(pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut sorted: Vec<(usize, usize)> = pairs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    // sweep by descending i; a pair survives iff its j is below every j seen
    // so far among pairs with i′ ≥ i (ties in i handled by ascending j)
    let mut keep = Vec::new();
    let mut min_j = usize::MAX;
    let mut idx = sorted.len();
    while idx > 0 {
        let i = sorted[idx - 1].0;
        let mut start = idx;
        while start > 0 && sorted[start - 1].0 == i {
            start -= 1;
        }
        // within one i only the smallest j can survive
        let (_, j) = sorted[start];
        if j < min_j {
            keep.push((i, j));
            min_j = j;
        }
        idx = start;
    }
    keep.reverse();
    keep
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSeparator {
    pub i: usize,
    pub j: usize,
    pub separator: LinearSeparator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdditiveInfo {
    pub gamma: f64,
    /// The unrounded degree formula value.
    pub analysed_degree: f64,
    pub used_degree: usize,
    pub cap_binding: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config: TrainConfig,
    pub landmark_count: usize,
    pub train_size: usize,
    pub pairs_trained: usize,
    pub admitted_before_pruning: usize,
    pub query_count: u64,
    pub log_base: String,
    #[serde(default)]
    pub additive: Option<AdditiveInfo>,
}

/// A trained comparator: the predictor `g` of the landmark pipelines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparator {
    /// Oracle-sorted landmarks.
    pub landmarks: Vec<SubsetMask>,
    /// Minimal accepted pairs with their separators, ascending by `(i, j)`.
    pub pairs: Vec<PairSeparator>,
    pub feature_map: FeatureMap,
    pub provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct ComparatorDoc {
    schema_version: u32,
    #[serde(flatten)]
    comparator: Comparator,
}

impl Comparator {
    pub fn n(&self) -> usize {
        self.feature_map.n()
    }

    /// Checks structural invariants: sorted minimal pairs with valid indices
    /// and separators of the map's dimension.
    pub fn validate(&self) -> Result<()> {
        let idx: Vec<(usize, usize)> = self.pairs.iter().map(|p| (p.i, p.j)).collect();
        if prune_minimal(&idx) != idx {
            return Err(Error::Invariant("accepted pairs are not sorted minimal pairs".into()));
        }
        let m = self.landmarks.len();
        for p in &self.pairs {
            if p.i >= p.j || p.j >= m {
                return Err(Error::Invariant(format!("pair ({}, {}) invalid for m = {m}", p.i, p.j)));
            }
            if p.separator.w.len() != self.feature_map.dim() {
                return Err(Error::Invariant("separator dimension differs from feature map".into()));
            }
        }
        if self.landmarks.iter().any(|l| l.n() != self.n()) {
            return Err(Error::Invariant("landmark width differs from feature map".into()));
        }
        Ok(())
    }

    /// `true` when some accepted pair puts `a` strictly below its threshold and
    /// `b` strictly above (scan order ascending `(i, j)`); never queries the
    /// oracle.
    pub fn predict(&self, a: &SubsetMask, b: &SubsetMask) -> Result<bool> {
        if self.pairs.is_empty() {
            if a.n() != self.n() || b.n() != self.n() {
                return input("mask width differs from the comparator's ground set");
            }
            return Ok(false);
        }
        let xa = self.feature_map.embed(a)?;
        let xb = self.feature_map.embed(b)?;
        Ok(self.predict_embedded(&xa, &xb))
    }

    pub fn predict_embedded(&self, xa: &[f64], xb: &[f64]) -> bool {
        self.firing_pair(xa, xb).is_some()
    }

    /// Index into `pairs` of the first pair that fires, if any.
    pub fn firing_pair(&self, xa: &[f64], xb: &[f64]) -> Option<usize> {
        self.pairs.iter().position(|p| {
            let t = p.separator.theta;
            p.separator.score(xa) < t && t < p.separator.score(xb)
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = ComparatorDoc { schema_version: COMPARATOR_SCHEMA_VERSION, comparator: self.clone() };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ComparatorDoc = serde_json::from_str(text)?;
        if doc.schema_version != COMPARATOR_SCHEMA_VERSION {
            return input(format!("unsupported comparator schema_version {}", doc.schema_version));
        }
        doc.comparator.validate()?;
        Ok(doc.comparator)
    }
}

/// Per-pair outcome, kept for auditing the acceptance rule.
#[derive(Debug, Clone, PartialEq)]
pub struct PairFit {
    pub i: usize,
    pub j: usize,
    pub negatives: usize,
    pub positives: usize,
    /// The fitted separator (absent when the realizable path failed).
    pub separator: Option<LinearSeparator>,
    /// Training mistakes of `separator` over the pair's samples, with multiplicity.
    pub mistakes: usize,
    pub admitted: bool,
}

/// Everything the training run saw, for test-time auditing.
#[derive(Debug, Clone)]
pub struct TrainReport {
    /// Distinct sets of the training sample `S₂`, in order of first draw.
    pub train_set: Vec<SubsetMask>,
    /// How often each distinct set was drawn; sums to `|S₂|`.
    pub multiplicity: Vec<usize>,
    pub positions: Vec<LandmarkPosition>,
    pub fits: Vec<PairFit>,
    pub wall_ms: u128,
}

#[derive(Debug, Clone)]
pub struct Trained {
    pub comparator: Comparator,
    pub report: TrainReport,
}

/// Label of a located sample for landmark pair `(i, j)`; `None` when the
/// sample falls strictly between the two landmarks.
#[inline]
pub fn pair_label(pos: &LandmarkPosition, i: usize, j: usize) -> Option<Label> {
    if pos.le_landmark(i) {
        Some(Label::Negative)
    } else if pos.ge_landmark(j) {
        Some(Label::Positive)
    } else {
        None
    }
}

fn landmark_pairs(m: usize, adjacent_only: bool) -> Vec<(usize, usize)> {
    if adjacent_only {
        (0..m.saturating_sub(1)).map(|i| (i, i + 1)).collect()
    } else {
        (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect()
    }
}

enum Acceptance {
    Realizable,
    Tolerant { max_mistakes_fraction: f64 },
}

/// Multiplicative pipeline: exact per-pair separators in the feature space of `map`.
pub fn train_multiplicative<F: SetFn>(
    oracle: &ComparisonOracle<F>,
    map: &FeatureMap,
    config: &TrainConfig,
    dist: SampleDistribution,
) -> Result<Trained> {
    config.validate()?;
    dist.validate()?;
    if !matches!(config.mode, Mode::Multiplicative { .. }) {
        return input("train_multiplicative needs a multiplicative mode");
    }
    let m = config.landmarks.unwrap_or_else(|| landmark_count(config.eps, config.delta));
    let size = match config.train_size {
        Some(s) => s,
        None => checked_size(multiplicative_train_size(m, config.eps, config.delta, map.dim(), config.sample_constant))?,
    };
    run_pipeline(oracle, map, config, dist, m, size, Acceptance::Realizable, None)
}

/// Degree, gamma and capping information for the additive pipeline.
pub fn additive_plan(config: &TrainConfig, n: usize) -> Result<AdditiveInfo> {
    let Mode::Additive { beta, degree_cap } = config.mode else {
        return input("additive plan needs an additive mode");
    };
    let gamma = additive_gamma(beta, config.eps, config.delta);
    let analysed_degree = additive_degree(gamma);
    // degrees above n add no features
    let effective = if analysed_degree.ceil() >= n as f64 { n } else { analysed_degree.ceil() as usize };
    let used = match degree_cap {
        Some(cap) => cap.min(effective),
        None => {
            let dim = count_subsets(n, 0, effective);
            if dim > MAX_DIM {
                return Err(Error::Capacity {
                    what: format!("Fourier features of degree k = {} (γ = {gamma:.3e})", analysed_degree.ceil()),
                    dim,
                    limit: MAX_DIM,
                });
            }
            effective
        }
    };
    Ok(AdditiveInfo { gamma, analysed_degree, used_degree: used, cap_binding: used < effective })
}

/// Additive pipeline: uniform samples, Fourier features of bounded degree,
/// tolerance-based pair acceptance.
pub fn train_additive<F: SetFn>(oracle: &ComparisonOracle<F>, config: &TrainConfig) -> Result<Trained> {
    config.validate()?;
    let plan = additive_plan(config, oracle.n())?;
    let map = FeatureMap::parity_degree(oracle.n(), plan.used_degree)?;
    let m = config.landmarks.unwrap_or_else(|| landmark_count(config.eps, config.delta));
    let size = match config.train_size {
        Some(s) => s,
        None => checked_size(additive_train_size(m, config.eps, config.delta, map.dim(), config.sample_constant))?,
    };
    let max_mistakes_fraction = config.eps / (4.0 * (m * m) as f64);
    run_pipeline(
        oracle,
        &map,
        config,
        SampleDistribution::Uniform,
        m,
        size,
        Acceptance::Tolerant { max_mistakes_fraction },
        Some(plan),
    )
}

fn checked_size(size: f64) -> Result<usize> {
    if !(size <= MAX_TRAIN_SIZE) {
        return Err(Error::Capacity {
            what: "training set from the sample-size formula".into(),
            dim: if size.is_finite() { size as u128 } else { u128::MAX },
            limit: MAX_TRAIN_SIZE as u128,
        });
    }
    Ok(size.max(1.0) as usize)
}

#[allow(clippy::too_many_arguments)]
fn run_pipeline<F: SetFn>(
    oracle: &ComparisonOracle<F>,
    map: &FeatureMap,
    config: &TrainConfig,
    dist: SampleDistribution,
    m: usize,
    size: usize,
    acceptance: Acceptance,
    additive: Option<AdditiveInfo>,
) -> Result<Trained> {
    let start = Instant::now();
    let n = oracle.n();
    if map.n() != n {
        return input(format!("feature map over n = {} but target has n = {n}", map.n()));
    }
    let queries_before = oracle.queries();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    // landmarks first, then the training sample; both i.i.d. from `dist`
    let drawn: Vec<SubsetMask> = (0..m).map(|_| dist.sample(n, &mut rng)).collect();
    let mut slot: HashMap<SubsetMask, usize> = HashMap::new();
    let mut train_set: Vec<SubsetMask> = Vec::new();
    let mut multiplicity: Vec<usize> = Vec::new();
    for _ in 0..size {
        let s = dist.sample(n, &mut rng);
        match slot.get(&s) {
            Some(&k) => multiplicity[k] += 1,
            None => {
                slot.insert(s, train_set.len());
                train_set.push(s);
                multiplicity.push(1);
            }
        }
    }
    drop(slot);

    let order = oracle.oracle_sort(&drawn)?;
    let landmarks: Vec<SubsetMask> = order.iter().map(|&k| drawn[k]).collect();
    let positions = train_set
        .iter()
        .map(|s| oracle.locate_with_ties(s, &landmarks))
        .collect::<Result<Vec<_>>>()?;
    let features = train_set.iter().map(|s| map.embed(s)).collect::<Result<Vec<_>>>()?;

    let pairs = landmark_pairs(m, config.adjacent_only);
    let fits: Vec<PairFit> = pairs
        .par_iter()
        .enumerate()
        .map(|(pair_index, &(i, j))| {
            let mut samples: Vec<LabeledSample<&[f64]>> = Vec::new();
            let mut weights: Vec<usize> = Vec::new();
            let (mut negatives, mut positives) = (0, 0);
            for ((pos, x), &c) in positions.iter().zip(&features).zip(&multiplicity) {
                if let Some(l) = pair_label(pos, i, j) {
                    match l {
                        Label::Negative => negatives += c,
                        Label::Positive => positives += c,
                    }
                    samples.push(LabeledSample::new(x.as_slice(), l));
                    weights.push(c);
                }
            }
            let (separator, mistakes, admitted) = match acceptance {
                Acceptance::Realizable => match train_realizable(&samples)? {
                    Realizable::Feasible(sep) | Realizable::Vacuous(sep) => {
                        let mistakes = count_mistakes(&sep, &samples);
                        (Some(sep), mistakes, mistakes == 0)
                    }
                    Realizable::Infeasible => (None, negatives + positives, false),
                },
                Acceptance::Tolerant { max_mistakes_fraction } => {
                    let cfg = TolerantConfig {
                        seed: config.seed ^ (pair_index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
                        ..TolerantConfig::default()
                    };
                    let fit = train_tolerant_weighted(&samples, &weights, 0.0, cfg)?;
                    // the fraction is taken over the whole training set S₂
                    let admitted = fit.mistakes as f64 <= max_mistakes_fraction * size as f64;
                    (Some(fit.separator), fit.mistakes, admitted)
                }
            };
            Ok(PairFit { i, j, negatives, positives, separator, mistakes, admitted })
        })
        .collect::<Result<Vec<_>>>()?;

    let admitted: Vec<(usize, usize)> = fits.iter().filter(|f| f.admitted).map(|f| (f.i, f.j)).collect();
    let kept = prune_minimal(&admitted);
    let lookup: HashMap<(usize, usize), &PairFit> = fits.iter().map(|f| ((f.i, f.j), f)).collect();
    let kept_pairs = kept
        .iter()
        .map(|&(i, j)| PairSeparator {
            i,
            j,
            separator: lookup[&(i, j)].separator.clone().expect("admitted pairs have separators"),
        })
        .collect();

    let comparator = Comparator {
        landmarks,
        pairs: kept_pairs,
        feature_map: map.clone(),
        provenance: Provenance {
            config: config.clone(),
            landmark_count: m,
            train_size: size,
            pairs_trained: pairs.len(),
            admitted_before_pruning: admitted.len(),
            query_count: oracle.queries() - queries_before,
            log_base: "e".into(),
            additive,
        },
    };
    Ok(Trained {
        comparator,
        report: TrainReport { train_set, multiplicity, positions, fits, wall_ms: start.elapsed().as_millis() },
    })
}
