//! Additive-error comparator on a normalized coverage function, using
//! low-degree parity features and tolerant pair acceptance.
//!
//! cargo run --release --example additive_pipeline

use complearn::comparator::{additive_plan, train_additive};
use complearn::harness::{measure_error, SeparationRule};
use complearn::{setfn, ComparisonOracle, SampleDistribution, TrainConfig};

fn main() -> complearn::Result<()> {
    let n = 10;
    let beta = 0.1;
    let f = setfn::gen_coverage(n, 30, 0.2, 8)?.normalized()?;

    // the degree the analysis asks for is far above n for any useful β
    let plan = additive_plan(&TrainConfig::additive(0.1, 0.1, beta, None, 0), n)?;
    println!("gamma = {:.3e}, analysed degree = {:.3e}, usable degree = {}", plan.gamma, plan.analysed_degree, plan.used_degree);

    for cap in [1, 2, 3] {
        let cfg = TrainConfig::additive(0.1, 0.1, beta, Some(cap), 6).with_landmarks(12).with_train_size(2000);
        let trained = train_additive(&ComparisonOracle::new(f.clone()), &cfg)?;
        let admitted = trained.report.fits.iter().filter(|p| p.admitted).count();
        let est = measure_error(
            &trained.comparator,
            &f,
            SampleDistribution::Uniform,
            SeparationRule::Additive { beta },
            10_000,
            7,
        )?;
        println!(
            "degree cap {cap}: dim {:3}, {admitted:2} pairs admitted, {} kept, error {:.4} ± {:.4}",
            trained.comparator.feature_map.dim(),
            trained.comparator.pairs.len(),
            est.conditional_error,
            est.standard_error
        );
    }
    Ok(())
}
