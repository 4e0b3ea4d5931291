//! Learning to compare set functions from pairwise comparisons.
//!
//! A learner sees a hidden set function `f : 2^[n] → ℝ≥0` only through a
//! [`ComparisonOracle`](oracle::ComparisonOracle) answering "is `f(S) ≤ f(S′)`?".
//! It outputs a [`Comparator`](comparator::Comparator) that predicts the order
//! of pairs whose values are far enough apart.

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod comparator;
pub mod error;
pub mod featmap;
pub mod fixtures;
pub mod harness;
pub mod lp;
pub mod mask;
pub mod oracle;
pub mod querylearn;
pub mod septrain;
pub mod setfn;

pub use comparator::{Comparator, Mode, SampleDistribution, TrainConfig};
pub use error::{Error, Result};
pub use featmap::{ClassTag, FeatureMap};
pub use mask::SubsetMask;
pub use oracle::ComparisonOracle;
pub use setfn::{FunctionKind, SetFn, SetFunction};
