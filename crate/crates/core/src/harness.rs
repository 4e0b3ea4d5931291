//! Error measurement and seeded sweeps.
//!
//! A pair `(S, S′)` is first oriented by ground truth so that `f(S) ≤ f(S′)`.
//! It is *separated* when `α·f(S) ≤ f(S′)` and `f(S) < f(S′)` (multiplicative)
//! or `f(S) + β ≤ f(S′)` (additive). A separated pair is a *miss* when the
//! comparator does not answer `predict(S, S′) = 1`. Pairs on which `predict`
//! fires in both orientations are counted separately.
//!
//! Randomness: experiment cell `c` with seed `s` takes its target, training
//! and evaluation seeds from `ChaCha8Rng::seed_from_u64(s)` on stream `c`
//! (see [`cell_seeds`]), so any row can be reproduced with direct calls.

use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::comparator::{train_additive, train_multiplicative, Comparator, SampleDistribution, TrainConfig};
use crate::error::{input, Error, Result};
use crate::featmap::{select_map, ClassTag};
use crate::mask::all_subsets;
use crate::oracle::ComparisonOracle;
use crate::setfn::{self, SetFn, SetFunction};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SeparationRule {
    Multiplicative { alpha: f64 },
    Additive { beta: f64 },
}

impl SeparationRule {
    /// Whether an oriented pair (`lo ≤ hi`) is separated.
    #[inline]
    pub fn separated(&self, lo: f64, hi: f64) -> bool {
        match *self {
            SeparationRule::Multiplicative { alpha } => alpha * lo <= hi && lo < hi,
            SeparationRule::Additive { beta } => lo + beta <= hi,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub trials: usize,
    pub separated_count: usize,
    pub miss_count: usize,
    /// `miss_count / separated_count`; NaN (serialized as null) when vacuous.
    pub conditional_error: f64,
    /// No pair met the separation condition.
    pub vacuous: bool,
    /// `sqrt(p(1−p)/separated_count)`; NaN when vacuous.
    pub standard_error: f64,
    pub both_fire_count: usize,
    /// Oracle calls spent training the comparator.
    pub query_count: u64,
}

#[derive(Default)]
struct Tally {
    trials: usize,
    separated: usize,
    misses: usize,
    both: usize,
}

impl Tally {
    fn record(&mut self, cmp: &Comparator, rule: &SeparationRule, pair: (&[f64], f64), other: (&[f64], f64)) {
        let (lo, hi) = if pair.1 <= other.1 { (pair, other) } else { (other, pair) };
        let forward = cmp.predict_embedded(lo.0, hi.0);
        let backward = cmp.predict_embedded(hi.0, lo.0);
        self.trials += 1;
        if forward && backward {
            self.both += 1;
        }
        if rule.separated(lo.1, hi.1) {
            self.separated += 1;
            if !forward {
                self.misses += 1;
            }
        }
    }

    fn finish(self, query_count: u64) -> ErrorEstimate {
        let vacuous = self.separated == 0;
        let p = if vacuous { f64::NAN } else { self.misses as f64 / self.separated as f64 };
        let se = if vacuous { f64::NAN } else { (p * (1.0 - p) / self.separated as f64).sqrt() };
        ErrorEstimate {
            trials: self.trials,
            separated_count: self.separated,
            miss_count: self.misses,
            conditional_error: p,
            vacuous,
            standard_error: se,
            both_fire_count: self.both,
            query_count,
        }
    }
}

fn check_compatible<F: SetFn>(cmp: &Comparator, truth: &F) -> Result<()> {
    if cmp.n() != truth.n() {
        return input(format!("comparator over n = {} evaluated on a function with n = {}", cmp.n(), truth.n()));
    }
    Ok(())
}

/// Monte-Carlo estimate over `trials` i.i.d. pairs drawn from `dist`.
pub fn measure_error<F: SetFn>(
    cmp: &Comparator,
    truth: &F,
    dist: SampleDistribution,
    rule: SeparationRule,
    trials: usize,
    seed: u64,
) -> Result<ErrorEstimate> {
    check_compatible(cmp, truth)?;
    dist.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = truth.n();
    let mut tally = Tally::default();
    for _ in 0..trials {
        let a = dist.sample(n, &mut rng);
        let b = dist.sample(n, &mut rng);
        let xa = cmp.feature_map.embed(&a)?;
        let xb = cmp.feature_map.embed(&b)?;
        tally.record(cmp, &rule, (&xa, truth.value(&a)), (&xb, truth.value(&b)));
    }
    Ok(tally.finish(cmp.provenance.query_count))
}

/// Exact count over all `2^n × 2^n` ordered pairs (small `n` only).
pub fn measure_error_exhaustive<F: SetFn>(cmp: &Comparator, truth: &F, rule: SeparationRule) -> Result<ErrorEstimate> {
    check_compatible(cmp, truth)?;
    let n = truth.n();
    if n > 12 {
        return input(format!("exhaustive evaluation needs n <= 12, got {n}"));
    }
    let points: Vec<(Vec<f64>, f64)> = all_subsets(n)?
        .map(|s| Ok((cmp.feature_map.embed(&s)?, truth.value(&s))))
        .collect::<Result<_>>()?;
    let mut tally = Tally::default();
    for a in &points {
        for b in &points {
            tally.record(cmp, &rule, (&a.0, a.1), (&b.0, b.1));
        }
    }
    Ok(tally.finish(cmp.provenance.query_count))
}

/// Target family of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TargetSpec {
    Coverage {
        universe: usize,
        density: f64,
        /// Rescale so that the full set has value 1.
        #[serde(default)]
        normalize: bool,
    },
    Xos { trees: usize },
    GraphCut { edge_prob: f64 },
    Interaction { k: usize },
    /// Random positive modular function.
    Modular,
    CurvatureShift { universe: usize, density: f64, kappa: f64 },
}

impl TargetSpec {
    pub fn generate(&self, n: usize, seed: u64) -> Result<SetFunction> {
        match *self {
            TargetSpec::Coverage { universe, density, normalize } => {
                let f = setfn::gen_coverage(n, universe, density, seed)?;
                if normalize {
                    f.normalized()
                } else {
                    Ok(f)
                }
            }
            TargetSpec::Xos { trees } => setfn::gen_xos(n, trees, seed),
            TargetSpec::GraphCut { edge_prob } => setfn::cut_to_fourier(&setfn::gen_graph_cut(n, edge_prob, seed)?),
            TargetSpec::Interaction { k } => setfn::gen_interaction(n, k, seed),
            TargetSpec::Modular => Ok(setfn::gen_xos(n, 1, seed)?),
            TargetSpec::CurvatureShift { universe, density, kappa } => {
                setfn::curvature_shift(setfn::gen_coverage(n, universe, density, seed)?, kappa)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TargetSpec::Coverage { .. } => "coverage",
            TargetSpec::Xos { .. } => "xos",
            TargetSpec::GraphCut { .. } => "graph_cut",
            TargetSpec::Interaction { .. } => "interaction",
            TargetSpec::Modular => "modular",
            TargetSpec::CurvatureShift { .. } => "curvature_shift",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "learner", rename_all = "snake_case")]
pub enum LearnerSpec {
    /// Landmark pipeline with the map and separation of `class`.
    Multiplicative {
        class: ClassTag,
        /// Overrides the class's declared separation when evaluating.
        #[serde(default)]
        alpha: Option<f64>,
    },
    /// Fourier-feature pipeline; one cell per degree cap.
    Additive { beta: f64, degree_caps: Vec<usize> },
}

/// Description of a sweep: one cell per `(n, train size, degree cap)`
/// combination, one row per cell and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub name: String,
    pub target: TargetSpec,
    pub learner: LearnerSpec,
    pub n_values: Vec<usize>,
    pub eps: f64,
    pub delta: f64,
    #[serde(default)]
    pub landmarks: Option<usize>,
    /// Training-set sizes; `[]` means the formula size.
    #[serde(default)]
    pub train_sizes: Vec<usize>,
    #[serde(default = "one")]
    pub sample_constant: f64,
    #[serde(default)]
    pub adjacent_only: bool,
    #[serde(default)]
    pub distribution: SampleDistribution,
    pub trials: usize,
    pub seeds: Vec<u64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub index: usize,
    pub n: usize,
    pub train_size: Option<usize>,
    pub degree_cap: Option<usize>,
}

impl SweepSpec {
    pub fn cells(&self) -> Vec<SweepCell> {
        let sizes: Vec<Option<usize>> =
            if self.train_sizes.is_empty() { vec![None] } else { self.train_sizes.iter().copied().map(Some).collect() };
        let caps: Vec<Option<usize>> = match &self.learner {
            LearnerSpec::Additive { degree_caps, .. } if !degree_caps.is_empty() => {
                degree_caps.iter().copied().map(Some).collect()
            }
            _ => vec![None],
        };
        let mut out = Vec::new();
        for &n in &self.n_values {
            for &train_size in &sizes {
                for &degree_cap in &caps {
                    out.push(SweepCell { index: out.len(), n, train_size, degree_cap });
                }
            }
        }
        out
    }
}

/// One result row; CSV column order follows field order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub sweep: String,
    pub cell: usize,
    pub target: String,
    pub n: usize,
    pub seed: u64,
    pub degree_cap: Option<usize>,
    pub landmarks: usize,
    pub train_size: usize,
    pub separation: f64,
    pub trials: usize,
    pub separated_count: usize,
    pub miss_count: usize,
    pub conditional_error: Option<f64>,
    pub standard_error: Option<f64>,
    pub both_fire_count: usize,
    pub query_count: u64,
    pub pairs_admitted: usize,
    pub pairs_kept: usize,
    pub wall_ms: Option<u128>,
    pub status: String,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Record wall time; off for byte-reproducible output.
    pub timing: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { jobs: None, timing: true }
    }
}

/// Everything produced by one experiment cell for one seed.
pub struct Experiment {
    pub target: SetFunction,
    pub comparator: Comparator,
    pub estimate: ErrorEstimate,
    pub separation: SeparationRule,
}

/// Seeds for target generation, training and evaluation of one `(cell, seed)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellSeeds {
    pub target: u64,
    pub train: u64,
    pub eval: u64,
}

pub fn cell_seeds(seed: u64, cell_index: usize) -> CellSeeds {
    use rand::RngCore;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(cell_index as u64);
    CellSeeds { target: rng.next_u64(), train: rng.next_u64(), eval: rng.next_u64() }
}

/// Runs one `(cell, seed)`: generate, train, measure.
pub fn run_experiment(spec: &SweepSpec, cell: &SweepCell, seed: u64) -> Result<Experiment> {
    let CellSeeds { target: target_seed, train: train_seed, eval: eval_seed } = cell_seeds(seed, cell.index);
    let target = spec.target.generate(cell.n, target_seed)?;
    let oracle = ComparisonOracle::new(target.clone());
    let (comparator, separation, dist) = match &spec.learner {
        LearnerSpec::Multiplicative { class, alpha } => {
            let (map, declared) = select_map(class, cell.n)?;
            let alpha = alpha.unwrap_or(declared);
            let mut cfg = TrainConfig::multiplicative(spec.eps, spec.delta, alpha, train_seed);
            cfg.landmarks = spec.landmarks;
            cfg.train_size = cell.train_size;
            cfg.sample_constant = spec.sample_constant;
            cfg.adjacent_only = spec.adjacent_only;
            let trained = train_multiplicative(&oracle, &map, &cfg, spec.distribution)?;
            (trained.comparator, SeparationRule::Multiplicative { alpha }, spec.distribution)
        }
        LearnerSpec::Additive { beta, .. } => {
            let mut cfg = TrainConfig::additive(spec.eps, spec.delta, *beta, cell.degree_cap, train_seed);
            cfg.landmarks = spec.landmarks;
            cfg.train_size = cell.train_size;
            cfg.sample_constant = spec.sample_constant;
            cfg.adjacent_only = spec.adjacent_only;
            let trained = train_additive(&oracle, &cfg)?;
            (trained.comparator, SeparationRule::Additive { beta: *beta }, SampleDistribution::Uniform)
        }
    };
    let estimate = measure_error(&comparator, &target, dist, separation, spec.trials, eval_seed)?;
    Ok(Experiment { target, comparator, estimate, separation })
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn row_for(spec: &SweepSpec, cell: &SweepCell, seed: u64, timing: bool) -> SweepRow {
    let start = Instant::now();
    let result = run_experiment(spec, cell, seed);
    let wall = timing.then(|| start.elapsed().as_millis());
    let mut row = SweepRow {
        sweep: spec.name.clone(),
        cell: cell.index,
        target: spec.target.name().to_string(),
        n: cell.n,
        seed,
        degree_cap: cell.degree_cap,
        landmarks: 0,
        train_size: 0,
        separation: f64::NAN,
        trials: spec.trials,
        separated_count: 0,
        miss_count: 0,
        conditional_error: None,
        standard_error: None,
        both_fire_count: 0,
        query_count: 0,
        pairs_admitted: 0,
        pairs_kept: 0,
        wall_ms: wall,
        status: String::new(),
    };
    match result {
        Ok(exp) => {
            let p = &exp.comparator.provenance;
            row.landmarks = p.landmark_count;
            row.train_size = p.train_size;
            row.separation = match exp.separation {
                SeparationRule::Multiplicative { alpha } => alpha,
                SeparationRule::Additive { beta } => beta,
            };
            row.separated_count = exp.estimate.separated_count;
            row.miss_count = exp.estimate.miss_count;
            row.conditional_error = finite(exp.estimate.conditional_error);
            row.standard_error = finite(exp.estimate.standard_error);
            row.both_fire_count = exp.estimate.both_fire_count;
            row.query_count = p.query_count;
            row.pairs_admitted = p.admitted_before_pruning;
            row.pairs_kept = exp.comparator.pairs.len();
            row.status = if exp.estimate.vacuous { "vacuous".into() } else { "ok".into() };
        }
        Err(Error::Capacity { what, dim, limit }) => {
            row.status = format!("capacity: {what} dim {dim} > {limit}");
        }
        Err(e) => row.status = format!("error: {e}"),
    }
    row
}

/// Runs every `(cell, seed)`; failures are recorded per row and the sweep
/// continues. Rows come back in `(cell, seed)` order regardless of `jobs`.
pub fn run_sweep(spec: &SweepSpec, opts: SweepOptions) -> Result<Vec<SweepRow>> {
    if spec.seeds.is_empty() || spec.n_values.is_empty() {
        return input("sweep needs at least one n value and one seed");
    }
    let work: Vec<(SweepCell, u64)> =
        spec.cells().into_iter().flat_map(|c| spec.seeds.iter().map(move |&s| (c.clone(), s))).collect();
    let run = || work.par_iter().map(|(c, s)| row_for(spec, c, *s, opts.timing)).collect::<Vec<_>>();
    Ok(match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    })
}

/// One row per cell and seed, columns in [`SweepRow`] field order.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Long format for plotting: `sweep,target,n,train_size,degree_cap,seed,metric,value`.
pub fn write_long_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sweep", "target", "n", "train_size", "degree_cap", "seed", "metric", "value"])?;
    for r in rows {
        let cap = r.degree_cap.map(|c| c.to_string()).unwrap_or_default();
        let metrics: [(&str, Option<f64>); 5] = [
            ("conditional_error", r.conditional_error),
            ("standard_error", r.standard_error),
            ("separated_fraction", (r.trials > 0).then(|| r.separated_count as f64 / r.trials as f64)),
            ("query_count", Some(r.query_count as f64)),
            ("pairs_kept", Some(r.pairs_kept as f64)),
        ];
        for (name, v) in metrics {
            w.write_record([
                r.sweep.as_str(),
                r.target.as_str(),
                &r.n.to_string(),
                &r.train_size.to_string(),
                &cap,
                &r.seed.to_string(),
                name,
                &v.map(|x| x.to_string()).unwrap_or_default(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, rows)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separation_rules() {
        let m = SeparationRule::Multiplicative { alpha: 2.0 };
        assert!(m.separated(1.0, 2.0));
        assert!(!m.separated(1.0, 1.9));
        assert!(!m.separated(0.0, 0.0));
        assert!(m.separated(0.0, 0.5));
        let a = SeparationRule::Additive { beta: 0.3 };
        assert!(a.separated(0.1, 0.4));
        assert!(!a.separated(0.1, 0.39));
    }

    #[test]
    fn cells_enumerate_product() {
        let spec = SweepSpec {
            name: "t".into(),
            target: TargetSpec::Modular,
            learner: LearnerSpec::Additive { beta: 0.3, degree_caps: vec![1, 2] },
            n_values: vec![8, 12, 16],
            eps: 0.1,
            delta: 0.1,
            landmarks: None,
            train_sizes: vec![100, 200],
            sample_constant: 1.0,
            adjacent_only: false,
            distribution: SampleDistribution::Uniform,
            trials: 10,
            seeds: vec![1],
        };
        let cells = spec.cells();
        assert_eq!(cells.len(), 12);
        assert!(cells.iter().enumerate().all(|(i, c)| c.index == i));
    }
}
