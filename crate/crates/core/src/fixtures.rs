//! Small hand-checkable instances shared by tests, examples and the CLI.

use crate::comparator::{Comparator, PairSeparator, Provenance, TrainConfig};
use crate::featmap::FeatureMap;
use crate::mask::SubsetMask;
use crate::septrain::LinearSeparator;
use crate::setfn::{coverage_from_sets, path_cut, SetFunction};

/// Three items over a three-element universe with unit weights:
/// item 0 covers `{u0}`, item 1 covers `{u1}`, item 2 covers `{u0, u1, u2}`.
pub fn cov3() -> SetFunction {
    coverage_from_sets(3, &[&[0], &[1], &[0, 1, 2]], vec![1.0; 3]).expect("valid fixture")
}

/// Cut function of the unit-weight path `0 – 1 – 2`.
pub fn p3_cut() -> SetFunction {
    path_cut(3).expect("valid fixture")
}

/// Comparator for [`cov3`] with landmarks `{0}` (value 1) and `{2}` (value 3)
/// and the single pair separator `w = (0, 0, 1)`, `θ = 0.5`: it fires exactly
/// when the first set lacks item 2 and the second contains it.
pub fn cov3_witness() -> Comparator {
    let n = 3;
    let alpha = (n as f64).sqrt();
    let landmarks = vec![
        SubsetMask::from_elems(n, &[0]).expect("valid fixture"),
        SubsetMask::from_elems(n, &[2]).expect("valid fixture"),
    ];
    Comparator {
        landmarks,
        pairs: vec![PairSeparator { i: 0, j: 1, separator: LinearSeparator { w: vec![0.0, 0.0, 1.0], theta: 0.5 } }],
        feature_map: FeatureMap::characteristic(n).expect("valid fixture"),
        provenance: Provenance {
            config: TrainConfig::multiplicative(0.1, 0.1, alpha, 0).with_landmarks(2),
            landmark_count: 2,
            train_size: 0,
            pairs_trained: 1,
            admitted_before_pruning: 1,
            query_count: 0,
            log_base: "e".into(),
            additive: None,
        },
    }
}
