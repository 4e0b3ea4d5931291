//! Per-landmark-pair linear separators.
//!
//! [`train_realizable`] answers the exact question "is there a strict
//! separator?" through the simplex routine in [`crate::lp`].
//! [`train_tolerant`] is the agnostic variant: realizable first, otherwise a
//! hinge-loss fit followed by an exact threshold sweep, always reporting the
//! true 0-1 error of what it returns.

use std::collections::HashMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::lp::{separate, Separation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    /// `f(S) ≤ f(S_i)`.
    Negative,
    /// `f(S) ≥ f(S_j)`.
    Positive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample<X = Vec<f64>> {
    pub x: X,
    pub label: Label,
}

impl<X> LabeledSample<X> {
    pub fn new(x: X, label: Label) -> Self {
        Self { x, label }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSeparator {
    pub w: Vec<f64>,
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Negative,
    Positive,
    OnThreshold,
}

impl LinearSeparator {
    #[inline]
    pub fn score(&self, x: &[f64]) -> f64 {
        self.w.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn classify(&self, x: &[f64]) -> Result<Side> {
        if x.len() != self.w.len() {
            return input(format!("feature length {} for separator of dim {}", x.len(), self.w.len()));
        }
        let s = self.score(x);
        Ok(if (s - self.theta).abs() <= 1e-9 * (1.0 + self.theta.abs()) {
            Side::OnThreshold
        } else if s < self.theta {
            Side::Negative
        } else {
            Side::Positive
        })
    }

    /// `true` when `x` lands strictly on the side its label asks for.
    pub fn agrees(&self, x: &[f64], label: Label) -> bool {
        let s = self.score(x);
        match label {
            Label::Negative => s < self.theta,
            Label::Positive => s > self.theta,
        }
    }
}

/// Result of the exact separability test.
#[derive(Debug, Clone, PartialEq)]
pub enum Realizable {
    /// Zero training error with strict inequalities on every sample.
    Feasible(LinearSeparator),
    /// No samples at all; `w = e₁` with a threshold below every feature
    /// vector in `[−1, 1]^d`.
    Vacuous(LinearSeparator),
    Infeasible,
}

impl Realizable {
    pub fn separator(&self) -> Option<&LinearSeparator> {
        match self {
            Realizable::Feasible(s) | Realizable::Vacuous(s) => Some(s),
            Realizable::Infeasible => None,
        }
    }
}

fn check_dims<X: AsRef<[f64]>>(samples: &[LabeledSample<X>]) -> Result<usize> {
    let d = samples.first().map(|s| s.x.as_ref().len()).unwrap_or(1);
    if d == 0 {
        return input("feature dimension must be at least 1");
    }
    if samples.iter().any(|s| s.x.as_ref().len() != d) {
        return input("samples do not share one feature dimension");
    }
    Ok(d)
}

fn key(x: &[f64]) -> Vec<u64> {
    x.iter().map(|v| v.to_bits()).collect()
}

/// Margin-one strict separator or `Infeasible`.
pub fn train_realizable<X: AsRef<[f64]>>(samples: &[LabeledSample<X>]) -> Result<Realizable> {
    let d = check_dims(samples)?;
    if samples.is_empty() {
        let mut w = vec![0.0; d];
        w[0] = 1.0;
        return Ok(Realizable::Vacuous(LinearSeparator { w, theta: -2.0 }));
    }
    // distinct points per class; the same point under both labels is fatal
    let mut seen: HashMap<Vec<u64>, Label> = HashMap::new();
    let mut neg: Vec<&[f64]> = Vec::new();
    let mut pos: Vec<&[f64]> = Vec::new();
    for s in samples {
        let x = s.x.as_ref();
        match seen.get(&key(x)) {
            Some(l) if *l == s.label => continue,
            Some(_) => return Ok(Realizable::Infeasible),
            None => {
                seen.insert(key(x), s.label);
                match s.label {
                    Label::Negative => neg.push(x),
                    Label::Positive => pos.push(x),
                }
            }
        }
    }
    if neg.is_empty() || pos.is_empty() {
        return Ok(Realizable::Feasible(one_class(d, &neg, &pos)));
    }
    Ok(match separate(&neg, &pos) {
        Separation::Separable { w, theta } => Realizable::Feasible(LinearSeparator { w, theta }),
        Separation::Inseparable => Realizable::Infeasible,
    })
}

/// All samples on the present class's side of `w = e₁`.
fn one_class(d: usize, neg: &[&[f64]], pos: &[&[f64]]) -> LinearSeparator {
    let mut w = vec![0.0; d];
    w[0] = 1.0;
    let theta = if pos.is_empty() {
        neg.iter().map(|x| x[0]).fold(f64::NEG_INFINITY, f64::max) + 1.0
    } else {
        pos.iter().map(|x| x[0]).fold(f64::INFINITY, f64::min) - 1.0
    };
    LinearSeparator { w, theta }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerantConfig {
    pub seed: u64,
    pub epochs: usize,
    pub lambda: f64,
}

impl Default for TolerantConfig {
    fn default() -> Self {
        Self { seed: 0, epochs: 40, lambda: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TolerantFit {
    pub separator: LinearSeparator,
    /// Samples not strictly on their label's side.
    pub mistakes: usize,
    /// `mistakes / samples.len()` (0 for an empty sample).
    pub error: f64,
    /// Found by the exact feasibility path.
    pub realizable: bool,
}

/// Counts samples that a separator does not put strictly on the correct side.
pub fn count_mistakes<X: AsRef<[f64]>>(sep: &LinearSeparator, samples: &[LabeledSample<X>]) -> usize {
    samples.iter().filter(|s| !sep.agrees(s.x.as_ref(), s.label)).count()
}

/// Agnostic separator with its honest empirical 0-1 error.
///
/// `tolerance` is only validated here; the acceptance decision belongs to the
/// caller.
pub fn train_tolerant<X: AsRef<[f64]> + Sync>(
    samples: &[LabeledSample<X>],
    tolerance: f64,
    cfg: TolerantConfig,
) -> Result<TolerantFit> {
    train_tolerant_weighted(samples, &vec![1; samples.len()], tolerance, cfg)
}

/// [`train_tolerant`] where sample `i` stands for `weights[i]` copies.
/// Mistakes and error are weighted the same way.
pub fn train_tolerant_weighted<X: AsRef<[f64]> + Sync>(
    samples: &[LabeledSample<X>],
    weights: &[usize],
    tolerance: f64,
    cfg: TolerantConfig,
) -> Result<TolerantFit> {
    if !(0.0..1.0).contains(&tolerance) {
        return input(format!("tolerance {tolerance} outside [0, 1)"));
    }
    if weights.len() != samples.len() {
        return input("one weight per sample required");
    }
    let total: usize = weights.iter().sum();
    let finish = |separator: LinearSeparator, realizable: bool| {
        let mistakes = count_mistakes_weighted(&separator, samples, weights);
        let error = if total == 0 { 0.0 } else { mistakes as f64 / total as f64 };
        TolerantFit { separator, mistakes, error, realizable }
    };
    if let Some(sep) = train_realizable(samples)?.separator() {
        let fit = finish(sep.clone(), true);
        if fit.mistakes == 0 {
            return Ok(fit);
        }
    }
    let w = hinge_direction(samples, weights, cfg);
    let theta = best_threshold(&w, samples, weights);
    Ok(finish(LinearSeparator { w, theta }, false))
}

/// Total weight of samples not strictly on their label's side.
pub fn count_mistakes_weighted<X: AsRef<[f64]>>(
    sep: &LinearSeparator,
    samples: &[LabeledSample<X>],
    weights: &[usize],
) -> usize {
    samples.iter().zip(weights).filter(|(s, _)| !sep.agrees(s.x.as_ref(), s.label)).map(|(_, w)| w).sum()
}

/// Averaged Pegasos on the hinge loss with a bias appended as a constant
/// feature. Steps draw samples in proportion to their weight.
fn hinge_direction<X: AsRef<[f64]>>(samples: &[LabeledSample<X>], weights: &[usize], cfg: TolerantConfig) -> Vec<f64> {
    let d = samples[0].x.as_ref().len();
    let mut w = vec![0.0; d + 1];
    let mut avg = vec![0.0; d + 1];
    let mut averaged = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pick = WeightedIndex::new(weights).expect("positive total weight");
    let total = cfg.epochs.max(1) * samples.len();
    for t in 1..=total {
        let i = pick.sample(&mut rng);
        let eta = 1.0 / (cfg.lambda * t as f64);
        let x = samples[i].x.as_ref();
        let y = match samples[i].label {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        };
        let margin = y * (x.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() + w[d]);
        let shrink = 1.0 - eta * cfg.lambda;
        w.iter_mut().for_each(|v| *v *= shrink);
        if margin < 1.0 {
            for (wj, xj) in w.iter_mut().zip(x) {
                *wj += eta * y * xj;
            }
            w[d] += eta * y;
        }
        if t * 2 > total {
            averaged += 1;
            for (a, v) in avg.iter_mut().zip(&w) {
                *a += v;
            }
        }
    }
    let mut out: Vec<f64> = avg[..d].iter().map(|v| v / averaged.max(1) as f64).collect();
    if out.iter().all(|v| *v == 0.0) {
        out[0] = 1.0;
    }
    out
}

/// Threshold minimizing the weighted 0-1 error of `w`, chosen among midpoints
/// of consecutive distinct projections (and one point beyond each end).
fn best_threshold<X: AsRef<[f64]>>(w: &[f64], samples: &[LabeledSample<X>], weights: &[usize]) -> f64 {
    let mut proj: Vec<(f64, Label, usize)> = samples
        .iter()
        .zip(weights)
        .map(|(s, &c)| (s.x.as_ref().iter().zip(w).map(|(a, b)| a * b).sum(), s.label, c))
        .collect();
    proj.sort_by(|a, b| a.0.total_cmp(&b.0));
    let negatives: usize = proj.iter().filter(|p| p.1 == Label::Negative).map(|p| p.2).sum();
    // threshold below everything: every negative is wrong
    let mut best_err = negatives;
    let mut best_theta = proj[0].0 - 1.0;
    let mut neg_left = 0usize;
    let mut pos_left = 0usize;
    let mut i = 0;
    while i < proj.len() {
        let v = proj[i].0;
        while i < proj.len() && proj[i].0 == v {
            match proj[i].1 {
                Label::Negative => neg_left += proj[i].2,
                Label::Positive => pos_left += proj[i].2,
            }
            i += 1;
        }
        let theta = if i < proj.len() { 0.5 * (v + proj[i].0) } else { v + 1.0 };
        // wrong: positives at or below, negatives above
        let err = pos_left + (negatives - neg_left);
        if err < best_err {
            best_err = err;
            best_theta = theta;
        }
    }
    best_theta
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &[f64], label: Label) -> LabeledSample {
        LabeledSample::new(x.to_vec(), label)
    }

    use Label::{Negative as N, Positive as P};

    #[test]
    fn realizable_one_dimensional() {
        let data = [s(&[0.0], N), s(&[2.0], P)];
        let Realizable::Feasible(sep) = train_realizable(&data).unwrap() else { panic!() };
        assert_eq!(count_mistakes(&sep, &data), 0);
    }

    #[test]
    fn xor_infeasible() {
        let data = [s(&[0., 0.], N), s(&[1., 1.], N), s(&[0., 1.], P), s(&[1., 0.], P)];
        assert_eq!(train_realizable(&data).unwrap(), Realizable::Infeasible);
    }

    #[test]
    fn cov3_pair_with_values_one_and_three() {
        // negatives {∅,{0},{1}} (value ≤ 1), positives: sets containing item 2 (value 3)
        let data = [
            s(&[0., 0., 0.], N),
            s(&[1., 0., 0.], N),
            s(&[0., 1., 0.], N),
            s(&[0., 0., 1.], P),
            s(&[1., 0., 1.], P),
            s(&[0., 1., 1.], P),
            s(&[1., 1., 1.], P),
        ];
        let Realizable::Feasible(sep) = train_realizable(&data).unwrap() else { panic!() };
        assert_eq!(count_mistakes(&sep, &data), 0);
        // the hand witness also works
        let witness = LinearSeparator { w: vec![0., 0., 1.], theta: 0.5 };
        assert_eq!(count_mistakes(&witness, &data), 0);
    }

    #[test]
    fn empty_and_single_class() {
        let empty: [LabeledSample; 0] = [];
        let Realizable::Vacuous(v) = train_realizable(&empty).unwrap() else { panic!() };
        assert_eq!(v.w, vec![1.0]);
        let only_neg = [s(&[0.3, 1.0], N), s(&[0.9, 0.0], N)];
        let Realizable::Feasible(sep) = train_realizable(&only_neg).unwrap() else { panic!() };
        assert_eq!(count_mistakes(&sep, &only_neg), 0);
        let only_pos = [s(&[0.3, 1.0], P)];
        let Realizable::Feasible(sep) = train_realizable(&only_pos).unwrap() else { panic!() };
        assert_eq!(count_mistakes(&sep, &only_pos), 0);
    }

    #[test]
    fn conflicting_duplicate_is_infeasible() {
        let data = [s(&[1.0, 0.0], N), s(&[1.0, 0.0], P)];
        assert_eq!(train_realizable(&data).unwrap(), Realizable::Infeasible);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let data = [s(&[1.0], N), s(&[1.0, 0.0], P)];
        assert!(train_realizable(&data).is_err());
    }

    #[test]
    fn tolerant_examples() {
        let sep = [s(&[0.0], N), s(&[2.0], P)];
        let fit = train_tolerant(&sep, 0.0, TolerantConfig::default()).unwrap();
        assert_eq!((fit.mistakes, fit.realizable), (0, true));

        let inter = [s(&[0.0], N), s(&[2.0], N), s(&[1.0], P), s(&[3.0], P)];
        let fit = train_tolerant(&inter, 0.1, TolerantConfig::default()).unwrap();
        assert_eq!(fit.error, 0.25);
        assert_eq!(fit.mistakes, count_mistakes(&fit.separator, &inter));

        let same = [s(&[1.0, 1.0], N), s(&[1.0, 1.0], P), s(&[1.0, 1.0], N), s(&[1.0, 1.0], P)];
        let fit = train_tolerant(&same, 0.1, TolerantConfig::default()).unwrap();
        assert_eq!(fit.error, 0.5);

        assert!(train_tolerant(&same, 1.0, TolerantConfig::default()).is_err());
    }

    #[test]
    fn weights_count_as_copies() {
        let data = [s(&[0.0], N), s(&[1.0], P), s(&[2.0], N)];
        let fit = train_tolerant_weighted(&data, &[1, 5, 1], 0.1, TolerantConfig::default()).unwrap();
        assert_eq!(fit.mistakes, 1);
        assert_eq!(fit.mistakes, count_mistakes_weighted(&fit.separator, &data, &[1, 5, 1]));
        assert!((fit.error - 1.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn classify_examples() {
        let a = LinearSeparator { w: vec![1.0, 0.0], theta: 0.5 };
        assert_eq!(a.classify(&[1.0, 0.0]).unwrap(), Side::Positive);
        assert_eq!(a.classify(&[0.0, 1.0]).unwrap(), Side::Negative);
        let b = LinearSeparator { w: vec![2.0, 0.0], theta: 2.0 };
        assert_eq!(b.classify(&[1.0, 0.0]).unwrap(), Side::OnThreshold);
        assert!(b.classify(&[1.0]).is_err());
    }
}
