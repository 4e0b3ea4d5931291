//! Trains a landmark comparator on a coverage function and measures its error
//! on pairs that differ by at least a factor of √n.
//!
//! cargo run --release --example train_coverage

use complearn::comparator::train_multiplicative;
use complearn::featmap::select_map;
use complearn::harness::{measure_error, SeparationRule};
use complearn::{setfn, ClassTag, ComparisonOracle, SampleDistribution, SubsetMask, TrainConfig};

fn main() -> complearn::Result<()> {
    let n = 12;
    let f = setfn::gen_coverage(n, 40, 0.2, 5)?;
    let oracle = ComparisonOracle::new(f.clone());
    let (map, alpha) = select_map(&ClassTag::Submodular, n)?;
    // sparse sets spread the values out, so many pairs are √n apart
    let dist = SampleDistribution::Product { p: 0.15 };
    let cfg = TrainConfig::multiplicative(0.1, 0.1, alpha, 1).with_landmarks(25).with_train_size(3000);
    let trained = train_multiplicative(&oracle, &map, &cfg, dist)?;
    let cmp = &trained.comparator;
    let prov = &cmp.provenance;
    println!(
        "m = {}, |S2| = {}, pairs kept {} of {} admitted, {} oracle queries",
        prov.landmark_count,
        prov.train_size,
        cmp.pairs.len(),
        prov.admitted_before_pruning,
        prov.query_count
    );

    let est = measure_error(cmp, &f, dist, SeparationRule::Multiplicative { alpha }, 20_000, 2)?;
    println!(
        "alpha = {alpha:.3}: {} separated pairs, {} misses, conditional error {:.4} ± {:.4}",
        est.separated_count, est.miss_count, est.conditional_error, est.standard_error
    );

    let small = SubsetMask::from_elems(n, &[0])?;
    let big = SubsetMask::from_elems(n, &[1, 2, 3, 4, 5, 6])?;
    println!("predict f({:?}) <= f({:?}): {}", small.elems(), big.elems(), cmp.predict(&small, &big)?);
    Ok(())
}
