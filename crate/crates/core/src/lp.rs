//! Strict linear separability as a margin-maximizing linear program.
//!
//! With `σ = +1` for negatives and `σ = −1` for positives, solve
//!
//! ```text
//!     maximize t   subject to   σ_s·(w·x_s − θ) + t ≤ 0,   −1 ≤ w_i ≤ 1,   0 ≤ t ≤ 1
//! ```
//!
//! The samples are strictly separable exactly when the optimum is positive.
//! The solution is rescaled to margin one and replayed against every sample
//! before it is returned.

use microlp::{ComparisonOp, OptimizationDirection, Problem};

/// Outcome of the separability test.
#[derive(Debug, Clone, PartialEq)]
pub enum Separation {
    /// `w·x ≤ θ − 1` on every negative and `w·x ≥ θ + 1` on every positive.
    Separable { w: Vec<f64>, theta: f64 },
    Inseparable,
}

/// Optimal margins at or below this are treated as zero.
const MARGIN_TOL: f64 = 1e-10;

/// Decides strict linear separability of `negatives` from `positives`.
///
/// All points must share one dimension `d ≥ 1`. Both lists must be
/// nonempty; single-class inputs are handled by the caller.
pub fn separate(negatives: &[&[f64]], positives: &[&[f64]]) -> Separation {
    assert!(!negatives.is_empty() && !positives.is_empty(), "both classes required");
    let d = negatives[0].len();
    let points = || negatives.iter().map(|x| (*x, 1.0)).chain(positives.iter().map(|x| (*x, -1.0)));
    // |w·x| ≤ ‖x‖₁ under the box, so θ never needs to leave this range
    let reach = points().map(|(x, _)| x.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max) + 1.0;

    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let w: Vec<_> = (0..d).map(|_| lp.add_var(0.0, (-1.0, 1.0))).collect();
    let theta = lp.add_var(0.0, (-reach, reach));
    let t = lp.add_var(1.0, (0.0, 1.0));
    for (x, sigma) in points() {
        let mut row: Vec<_> = w.iter().zip(x).filter(|(_, v)| **v != 0.0).map(|(&var, v)| (var, sigma * v)).collect();
        row.push((theta, -sigma));
        row.push((t, 1.0));
        lp.add_constraint(row.as_slice(), ComparisonOp::Le, 0.0);
    }
    let Ok(outcome) = lp.solve() else { return Separation::Inseparable };
    let Some(sol) = outcome.solution() else { return Separation::Inseparable };
    if !(sol.objective() > MARGIN_TOL) {
        return Separation::Inseparable;
    }
    let w: Vec<f64> = w.iter().map(|&v| sol.var_value(v)).collect();
    certificate(points(), w, sol.var_value(theta))
}

/// Rescales to margin one after checking every sample strictly.
fn certificate<'a>(points: impl Iterator<Item = (&'a [f64], f64)>, w: Vec<f64>, theta: f64) -> Separation {
    // slack_s = −σ_s (w·x_s − θ) must be strictly positive everywhere
    let mut min_slack = f64::INFINITY;
    for (x, sigma) in points {
        let score: f64 = x.iter().zip(&w).map(|(a, b)| a * b).sum();
        min_slack = min_slack.min(-sigma * (score - theta));
    }
    if !(min_slack > 0.0) || !min_slack.is_finite() || w.iter().all(|v| *v == 0.0) {
        return Separation::Inseparable;
    }
    let k = 1.0 / min_slack;
    Separation::Separable { w: w.iter().map(|v| v * k).collect(), theta: theta * k }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(neg: &[Vec<f64>], pos: &[Vec<f64>]) -> Separation {
        let n: Vec<&[f64]> = neg.iter().map(|v| v.as_slice()).collect();
        let p: Vec<&[f64]> = pos.iter().map(|v| v.as_slice()).collect();
        separate(&n, &p)
    }

    fn margins_ok(neg: &[Vec<f64>], pos: &[Vec<f64>], w: &[f64], theta: f64) -> bool {
        let dot = |x: &Vec<f64>| x.iter().zip(w).map(|(a, b)| a * b).sum::<f64>();
        neg.iter().all(|x| dot(x) <= theta - 1.0 + 1e-7) && pos.iter().all(|x| dot(x) >= theta + 1.0 - 1e-7)
    }

    #[test]
    fn one_dimensional() {
        let neg = vec![vec![0.0]];
        let pos = vec![vec![2.0]];
        match check(&neg, &pos) {
            Separation::Separable { w, theta } => {
                assert!(w[0] > 0.0);
                assert!(margins_ok(&neg, &pos, &w, theta));
            }
            Separation::Inseparable => panic!("separable"),
        }
    }

    #[test]
    fn xor_is_inseparable() {
        let neg = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
        let pos = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert_eq!(check(&neg, &pos), Separation::Inseparable);
    }

    #[test]
    fn interleaved_line_is_inseparable() {
        let neg = vec![vec![0.0], vec![2.0]];
        let pos = vec![vec![1.0], vec![3.0]];
        assert_eq!(check(&neg, &pos), Separation::Inseparable);
    }

    #[test]
    fn cube_threshold() {
        // majority on {0,1}^5 separates |x| ≤ 2 from |x| ≥ 3
        let mut neg = Vec::new();
        let mut pos = Vec::new();
        for b in 0u32..32 {
            let x: Vec<f64> = (0..5).map(|i| ((b >> i) & 1) as f64).collect();
            if b.count_ones() <= 2 {
                neg.push(x);
            } else {
                pos.push(x);
            }
        }
        match check(&neg, &pos) {
            Separation::Separable { w, theta } => assert!(margins_ok(&neg, &pos, &w, theta)),
            Separation::Inseparable => panic!("majority is a threshold function"),
        }
    }
}
