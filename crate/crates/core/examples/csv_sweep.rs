//! Runs a small sweep over n and seeds and prints the rows as CSV.
//!
//! cargo run --release --example csv_sweep > rows.csv

use complearn::harness::{run_sweep, write_csv, LearnerSpec, SweepOptions, SweepSpec, TargetSpec};
use complearn::{ClassTag, SampleDistribution};

fn main() -> complearn::Result<()> {
    let spec = SweepSpec {
        name: "coverage-by-n".into(),
        target: TargetSpec::Coverage { universe: 30, density: 0.2, normalize: false },
        learner: LearnerSpec::Multiplicative { class: ClassTag::Submodular, alpha: None },
        n_values: vec![8, 12, 16],
        eps: 0.1,
        delta: 0.1,
        landmarks: Some(20),
        train_sizes: vec![2000],
        sample_constant: 1.0,
        adjacent_only: false,
        distribution: SampleDistribution::Product { p: 0.15 },
        trials: 5000,
        seeds: vec![1, 2, 3],
    };
    // the same spec as JSON is what `complearn sweep` reads
    eprintln!("{}", serde_json::to_string(&spec)?);
    let rows = run_sweep(&spec, SweepOptions { jobs: None, timing: false })?;
    write_csv(&rows, std::io::stdout().lock())
}
