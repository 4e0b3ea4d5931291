//! Classes that are exactly linear in a known feature map can be compared
//! with separation 1: modular, graph cut (parities) and interaction functions.
//!
//! cargo run --release --example exact_classes

use complearn::comparator::train_multiplicative;
use complearn::featmap::select_map;
use complearn::harness::{measure_error, SeparationRule};
use complearn::{setfn, ClassTag, ComparisonOracle, SampleDistribution, SetFunction, TrainConfig};

fn main() -> complearn::Result<()> {
    let n = 10;
    let cases: Vec<(&str, SetFunction, ClassTag)> = vec![
        ("modular", setfn::gen_xos(n, 1, 1)?, ClassTag::Modular),
        ("graph cut", setfn::cut_to_fourier(&setfn::gen_graph_cut(n, 0.3, 1)?)?, ClassTag::GraphCut),
        ("interaction", setfn::gen_interaction(n, 2, 1)?, ClassTag::Interaction { k: 2 }),
    ];
    for (name, f, class) in cases {
        let (map, alpha) = select_map(&class, n)?;
        let cfg = TrainConfig::multiplicative(0.1, 0.1, alpha, 3).with_landmarks(25).with_train_size(4000).adjacent();
        let trained = train_multiplicative(&ComparisonOracle::new(f.clone()), &map, &cfg, SampleDistribution::Uniform)?;
        let est = measure_error(
            &trained.comparator,
            &f,
            SampleDistribution::Uniform,
            SeparationRule::Multiplicative { alpha },
            10_000,
            4,
        )?;
        println!(
            "{name:12} dim {:3}  pairs {:2}  error on distinct values {:.4}",
            map.dim(),
            trained.comparator.pairs.len(),
            est.conditional_error
        );
    }
    Ok(())
}
