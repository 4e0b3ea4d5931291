//! Learners that pick their own comparison queries: exact recovery of
//! disjunctions, and value buckets for functions with a small range.
//!
//! cargo run --example membership_queries

use complearn::querylearn::{learn_buckets, learn_buckets_approx, learn_disjunction};
use complearn::{setfn, ComparisonOracle, SubsetMask};

fn main() -> complearn::Result<()> {
    let target = setfn::gen_disjunction(12, 4)?;
    let oracle = ComparisonOracle::new(target);
    let support = learn_disjunction(&oracle)?;
    println!("disjunction support {:?} found with {} queries", support.elems(), oracle.queries());

    let k = 2;
    let f = setfn::gen_kdnf(8, k, 5, 4)?;
    let exact = learn_buckets(&ComparisonOracle::new(f.clone()), k)?;
    println!(
        "range-{k} target: {} buckets over {} subsets of size <= {}, {} queries",
        exact.buckets.len(),
        exact.num_subsets(),
        exact.subset_size_bound,
        exact.query_count
    );
    let a = SubsetMask::from_elems(8, &[0, 3])?;
    let b = SubsetMask::from_elems(8, &[1, 2, 5, 6])?;
    println!("predict f({:?}) <= f({:?}): {}", a.elems(), b.elems(), exact.predict(&a, &b)?);

    let rough = learn_buckets_approx(&ComparisonOracle::new(f), k, 2)?;
    println!("alpha = 2 uses subsets of size <= {} and {} queries", rough.subset_size_bound, rough.query_count);
    Ok(())
}
