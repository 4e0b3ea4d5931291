//! Invariants of the function families, the oracle, the trainers and the harness.

use complearn::comparator::{pair_label, train_multiplicative, Comparator, PairSeparator, TrainConfig, Trained};
use complearn::featmap::{cut_support, select_map, FeatureMap, MapKind};
use complearn::fixtures;
use complearn::harness::{self, cell_seeds, measure_error, measure_error_exhaustive, SeparationRule};
use complearn::mask::{all_subsets, SubsetMask};
use complearn::querylearn::learn_buckets;
use complearn::septrain::{
    count_mistakes, train_realizable, train_tolerant, Label, LabeledSample, LinearSeparator, Realizable, TolerantConfig,
};
use complearn::setfn::{self, ClassProperty, CheckMode, FnSet, SetFn, SetFunction};
use complearn::{ClassTag, ComparisonOracle, SampleDistribution};

fn subsets(n: usize) -> Vec<SubsetMask> {
    all_subsets(n).unwrap().collect()
}

fn train(f: &SetFunction, class: ClassTag, m: usize, size: usize, seed: u64) -> Trained {
    let (map, alpha) = select_map(&class, f.n).unwrap();
    let cfg = TrainConfig::multiplicative(0.2, 0.2, alpha, seed).with_landmarks(m).with_train_size(size);
    train_multiplicative(&ComparisonOracle::new(f.clone()), &map, &cfg, SampleDistribution::Uniform).unwrap()
}

#[test]
fn xos_is_subadditive_and_monotone() {
    for seed in 0..5 {
        let f = setfn::gen_xos(7, 3, seed).unwrap();
        for p in [ClassProperty::Monotone, ClassProperty::Subadditive] {
            assert!(setfn::verify_class(&f, p, CheckMode::Exhaustive).unwrap().passed(), "seed {seed} {p:?}");
        }
    }
}

#[test]
fn cut_fourier_form_matches_edge_count() {
    for seed in 0..5 {
        let n = 6;
        let g = setfn::gen_graph_cut(n, 0.5, seed).unwrap();
        let fourier = setfn::cut_to_fourier(&g).unwrap();
        let setfn::FunctionKind::GraphCut(params) = &g.kind else { panic!("not a cut function") };
        for s in subsets(n) {
            let direct: f64 = params
                .edges
                .iter()
                .filter(|e| s.contains(e.u) != s.contains(e.v))
                .map(|e| e.weight)
                .sum();
            assert!((fourier.value(&s) - direct).abs() < 1e-9);
            assert!((g.value(&s) - direct).abs() < 1e-9);
        }
    }
}

#[test]
fn sorted_neighbours_compare_true_and_locate_matches_counting() {
    let f = setfn::gen_coverage(8, 20, 0.25, 4).unwrap();
    let oracle = ComparisonOracle::new(f.clone());
    let sets: Vec<SubsetMask> = subsets(8).into_iter().step_by(7).collect();
    let m = sets.len();
    let before = oracle.queries();
    let perm = oracle.oracle_sort(&sets).unwrap();
    let sort_queries = oracle.queries() - before;
    let log = (m as f64).log2().ceil() as u64;
    assert!(sort_queries <= m as u64 * log + m as u64, "{sort_queries} queries for {m} sets");

    let sorted: Vec<SubsetMask> = perm.iter().map(|&i| sets[i]).collect();
    for w in sorted.windows(2) {
        assert!(oracle.compare(&w[0], &w[1]).unwrap());
    }
    for s in subsets(8) {
        let expected = sorted.iter().filter(|l| f.value(l) <= f.value(&s) + 1e-9).count();
        assert_eq!(oracle.locate(&s, &sorted).unwrap(), expected);
        let pos = oracle.locate_with_ties(&s, &sorted).unwrap();
        let below = sorted.iter().filter(|l| f.value(l) < f.value(&s) - 1e-9).count();
        assert_eq!((pos.at_most, pos.below), (expected, below));
    }
}

/// Every threshold cut of the target's values is linearly separable in `map`.
fn threshold_cuts_realizable(f: &dyn SetFn, map: &FeatureMap) -> bool {
    let sets = subsets(f.n());
    let xs: Vec<Vec<f64>> = sets.iter().map(|s| map.embed(s).unwrap()).collect();
    let mut values: Vec<f64> = sets.iter().map(|s| f.value(s)).collect();
    values.sort_by(f64::total_cmp);
    values.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    values.windows(2).all(|w| {
        let samples: Vec<LabeledSample<&[f64]>> = sets
            .iter()
            .zip(&xs)
            .map(|(s, x)| {
                let label = if f.value(s) <= w[0] + 1e-9 { Label::Negative } else { Label::Positive };
                LabeledSample::new(x.as_slice(), label)
            })
            .collect();
        matches!(train_realizable(&samples).unwrap(), Realizable::Feasible(_))
    })
}

#[test]
fn linear_classes_are_realizable_in_their_maps() {
    let n = 6;
    let cut = setfn::cut_to_fourier(&setfn::gen_graph_cut(n, 0.5, 9).unwrap()).unwrap();
    assert!(threshold_cuts_realizable(&cut, &FeatureMap::parity_support(n, cut_support(n)).unwrap()));
    let inter = setfn::gen_interaction(n, 2, 9).unwrap();
    assert!(threshold_cuts_realizable(&inter, &FeatureMap::new(MapKind::Intersect { k: 2 }, n).unwrap()));
    let cov = setfn::gen_coverage(n, 15, 0.3, 9).unwrap();
    assert!(threshold_cuts_realizable(&cov, &FeatureMap::new(MapKind::OrIndicator, n).unwrap()));
}

#[test]
fn monotone_transform_leaves_training_unchanged() {
    let f = setfn::gen_coverage(8, 20, 0.25, 2).unwrap();
    let cubed = FnSet { n: 8, f: |s: &SubsetMask| f.value(s).powi(3) + 5.0 };
    let (map, _) = select_map(&ClassTag::Submodular, 8).unwrap();
    let cfg = TrainConfig::multiplicative(0.2, 0.2, 8f64.sqrt(), 11).with_landmarks(8).with_train_size(400);
    let a = train_multiplicative(&ComparisonOracle::new(f.clone()), &map, &cfg, SampleDistribution::Uniform).unwrap();
    let b = train_multiplicative(&ComparisonOracle::new(cubed), &map, &cfg, SampleDistribution::Uniform).unwrap();
    assert_eq!(a.comparator.to_json().unwrap(), b.comparator.to_json().unwrap());
}

#[test]
fn realizable_trainer_is_scale_invariant() {
    let pts = [(vec![0.0, 1.0], Label::Negative), (vec![1.0, 0.0], Label::Negative), (vec![2.0, 2.0], Label::Positive)];
    for c in [1e-3, 1.0, 250.0] {
        let samples: Vec<LabeledSample> =
            pts.iter().map(|(x, l)| LabeledSample::new(x.iter().map(|v| v * c).collect(), *l)).collect();
        let sep = train_realizable(&samples).unwrap().separator().cloned().expect("separable at every scale");
        assert_eq!(count_mistakes(&sep, &samples), 0);
    }
}

#[test]
fn tolerant_mistakes_are_an_honest_recount() {
    let samples: Vec<LabeledSample> = (0..40)
        .map(|i| {
            let x = i as f64 / 40.0;
            // a few flipped labels make the set inseparable
            let label = if (x > 0.5) ^ (i % 9 == 0) { Label::Positive } else { Label::Negative };
            LabeledSample::new(vec![x, 1.0 - x], label)
        })
        .collect();
    let fit = train_tolerant(&samples, 0.2, TolerantConfig::default()).unwrap();
    assert!(!fit.realizable);
    assert_eq!(fit.mistakes, count_mistakes(&fit.separator, &samples));
    assert!((fit.error - fit.mistakes as f64 / 40.0).abs() < 1e-12);
}

#[test]
fn trained_comparator_replays_and_never_fires_on_itself() {
    let f = setfn::gen_coverage(8, 20, 0.25, 7).unwrap();
    let trained = train(&f, ClassTag::Submodular, 10, 800, 3);
    let cmp = &trained.comparator;
    cmp.validate().unwrap();
    for w in cmp.pairs.windows(2) {
        assert!(w[0].i < w[1].i && w[0].j < w[1].j, "pairs not minimal");
    }
    let r = &trained.report;
    for p in &cmp.pairs {
        for (s, pos) in r.train_set.iter().zip(&r.positions) {
            if let Some(label) = pair_label(pos, p.i, p.j) {
                let x = cmp.feature_map.embed(s).unwrap();
                assert!(p.separator.agrees(&x, label), "pair ({}, {}) misclassifies a training sample", p.i, p.j);
            }
        }
    }
    for fit in r.fits.iter().filter(|fit| fit.admitted) {
        assert_eq!(fit.mistakes, 0);
    }
    let sets = subsets(8);
    let xs: Vec<Vec<f64>> = sets.iter().map(|s| cmp.feature_map.embed(s).unwrap()).collect();
    for (s, x) in sets.iter().zip(&xs) {
        assert!(!cmp.predict(s, s).unwrap());
        for y in xs.iter().step_by(5) {
            if let Some(k) = cmp.firing_pair(x, y) {
                let sep = &cmp.pairs[k].separator;
                assert!(sep.score(x) < sep.theta && sep.theta < sep.score(y));
            }
        }
    }
}

#[test]
fn bucket_count_bounded_by_range() {
    for seed in 0..20 {
        let k = 1 + (seed as usize % 3);
        let f = setfn::gen_kdnf(6, k, 4, seed).unwrap();
        let p = learn_buckets(&ComparisonOracle::new(f), k).unwrap();
        assert!(p.buckets.len() <= k + 1);
    }
}

#[test]
fn witness_comparator_counts_by_hand() {
    let cmp = fixtures::cov3_witness();
    cmp.validate().unwrap();
    let est = measure_error_exhaustive(&cmp, &fixtures::cov3(), SeparationRule::Multiplicative { alpha: 3f64.sqrt() })
        .unwrap();
    assert_eq!((est.trials, est.separated_count, est.miss_count, est.both_fire_count), (64, 34, 10, 0));
    assert!((est.conditional_error - 10.0 / 34.0).abs() < 1e-12);
}

#[test]
fn empty_comparator_misses_everything() {
    let mut cmp = fixtures::cov3_witness();
    cmp.pairs.clear();
    let rule = SeparationRule::Multiplicative { alpha: 1.0 };
    let est = measure_error_exhaustive(&cmp, &fixtures::cov3(), rule).unwrap();
    assert!(est.separated_count > 0);
    assert_eq!(est.conditional_error, 1.0);

    // α·0 ≤ anything, so shift away from zero before asking for a vacuous estimate
    let base = fixtures::cov3();
    let shifted = FnSet { n: 3, f: |s: &SubsetMask| base.value(s) + 1.0 };
    let huge = SeparationRule::Multiplicative { alpha: 1e9 };
    let est = measure_error(&fixtures::cov3_witness(), &shifted, SampleDistribution::Uniform, huge, 200, 1).unwrap();
    assert!(est.vacuous && est.conditional_error.is_nan());
}

#[test]
fn perfect_comparator_on_modular_target() {
    let n = 4;
    let weights = vec![1.0, 2.0, 4.0, 8.0];
    let f = setfn::modular(weights.clone()).unwrap();
    let mut landmarks = subsets(n);
    landmarks.sort_by(|a, b| f.value(a).total_cmp(&f.value(b)));
    let pairs = landmarks
        .windows(2)
        .enumerate()
        .map(|(i, w)| PairSeparator {
            i,
            j: i + 1,
            separator: LinearSeparator { w: weights.clone(), theta: (f.value(&w[0]) + f.value(&w[1])) / 2.0 },
        })
        .collect();
    let template = fixtures::cov3_witness();
    let cmp = Comparator {
        landmarks,
        pairs,
        feature_map: FeatureMap::characteristic(n).unwrap(),
        provenance: template.provenance,
    };
    cmp.validate().unwrap();
    let est = measure_error_exhaustive(&cmp, &f, SeparationRule::Multiplicative { alpha: 1.0 }).unwrap();
    assert_eq!(est.separated_count, 16 * 15);
    assert_eq!(est.miss_count, 0);
}

fn small_spec(n_values: Vec<usize>, seeds: Vec<u64>) -> harness::SweepSpec {
    harness::SweepSpec {
        name: "props".into(),
        target: harness::TargetSpec::Coverage { universe: 20, density: 0.2, normalize: false },
        learner: harness::LearnerSpec::Multiplicative { class: ClassTag::Submodular, alpha: None },
        n_values,
        eps: 0.2,
        delta: 0.2,
        landmarks: Some(6),
        train_sizes: vec![200],
        sample_constant: 1.0,
        adjacent_only: false,
        distribution: SampleDistribution::Uniform,
        trials: 300,
        seeds,
    }
}

#[test]
fn sweep_row_matches_direct_experiment() {
    let spec = small_spec(vec![8], vec![5]);
    let rows = harness::run_sweep(&spec, harness::SweepOptions { jobs: Some(1), timing: false }).unwrap();
    assert_eq!(rows.len(), 1);
    let cell = &spec.cells()[0];
    let exp = harness::run_experiment(&spec, cell, 5).unwrap();
    let direct = measure_error(
        &exp.comparator,
        &exp.target,
        SampleDistribution::Uniform,
        exp.separation,
        spec.trials,
        cell_seeds(5, 0).eval,
    )
    .unwrap();
    let row = &rows[0];
    assert_eq!((row.separated_count, row.miss_count, row.both_fire_count), (direct.separated_count, direct.miss_count, direct.both_fire_count));
    assert_eq!(row.query_count, exp.comparator.provenance.query_count);
    assert_eq!(row.pairs_kept, exp.comparator.pairs.len());
    assert_eq!(row.status, if direct.vacuous { "vacuous" } else { "ok" });
    assert!(row.wall_ms.is_none());
}

#[test]
fn sweep_has_one_row_per_cell_and_seed() {
    let spec = small_spec(vec![8, 12, 16], vec![1, 2]);
    let rows = harness::run_sweep(&spec, harness::SweepOptions { jobs: None, timing: true }).unwrap();
    assert_eq!(rows.len(), 6);
    let ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    assert_eq!(ns, vec![8, 8, 12, 12, 16, 16]);
    assert!(rows.iter().all(|r| r.status == "ok" || r.status == "vacuous"));
    assert!(rows.iter().all(|r| r.wall_ms.is_some()));
    assert_ne!(cell_seeds(1, 0), cell_seeds(1, 1));
}
