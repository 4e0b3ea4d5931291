//! Sorting and locating sets using only pairwise comparisons.
//!
//! cargo run --example oracle_sort

use complearn::mask::subsets_by_size;
use complearn::setfn::{self, SetFn};
use complearn::ComparisonOracle;

fn main() -> complearn::Result<()> {
    let f = setfn::gen_coverage(10, 40, 0.15, 3)?;
    let oracle = ComparisonOracle::new(f.clone());

    let sets = subsets_by_size(10, 2, 2);
    let order = oracle.oracle_sort(&sets)?;
    let sorted: Vec<_> = order.iter().map(|&i| sets[i]).collect();
    println!("sorted {} pairs with {} comparisons", sets.len(), oracle.queries());
    for s in sorted.iter().take(3).chain(sorted.iter().rev().take(3)) {
        println!("  {:?} -> {:.2}", s.elems(), f.value(s));
    }

    let before = oracle.queries();
    let probe = complearn::SubsetMask::from_elems(10, &[1, 4, 7])?;
    let pos = oracle.locate_with_ties(&probe, &sorted)?;
    println!(
        "{:?} sits above {} landmarks, strictly above {} ({} comparisons)",
        probe.elems(),
        pos.at_most,
        pos.below,
        oracle.queries() - before
    );
    Ok(())
}
