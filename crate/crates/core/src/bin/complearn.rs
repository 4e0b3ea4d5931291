use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use complearn::comparator::{train_additive, train_multiplicative, Trained};
use complearn::error::{Error, Result};
use complearn::featmap::select_map;
use complearn::harness::{self, SeparationRule, SweepOptions, SweepSpec};
use complearn::querylearn;
use complearn::setfn::{self, CheckMode, ClassProperty, Verdict};
use complearn::{fixtures, ClassTag, Comparator, ComparisonOracle, SampleDistribution, SetFunction, SubsetMask, TrainConfig};

#[derive(Parser)]
#[command(name = "complearn", version, about = "Learn to compare set functions from pairwise comparisons")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a set function and write it as JSON
    Gen(GenArgs),
    /// Train a comparator from a function file's comparison oracle
    Train(TrainArgs),
    /// Predict whether f(A) <= f(B) with a trained comparator
    Predict(PredictArgs),
    /// Measure a comparator's conditional error against ground truth
    Eval(EvalArgs),
    /// Run a sweep described by a JSON file
    Sweep(SweepArgs),
    /// Learn with membership queries (disjunctions or buckets)
    Querylearn(QueryArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenClass {
    Coverage,
    Xos,
    Cut,
    Interaction,
    Modular,
    Disjunction,
    Kdnf,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    class: GenClass,
    /// Ground set size
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Coverage: universe size
    #[arg(long, default_value_t = 40)]
    universe: usize,
    /// Coverage: probability an item covers a universe element
    #[arg(long, default_value_t = 0.2)]
    density: f64,
    /// Coverage: rescale so f([n]) = 1
    #[arg(long)]
    normalize: bool,
    /// XOS: number of SUM trees
    #[arg(long, default_value_t = 3)]
    trees: usize,
    /// Cut: edge probability of the random graph
    #[arg(long, default_value_t = 0.3)]
    edge_prob: f64,
    /// Cut: canned graph instead of a random one (path3)
    #[arg(long)]
    graph: Option<String>,
    /// Interaction degree, or DNF range bound
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// DNF: number of terms
    #[arg(long, default_value_t = 4)]
    terms: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Modular,
    Submodular,
    Xos,
    Subadditive,
    Curvature,
    XosTrees,
    Interaction,
    Fourier,
    Cut,
    Coverage,
    SubmodularAdditive,
}

#[derive(Args)]
struct TrainArgs {
    /// Function file
    function: PathBuf,
    #[arg(long, value_enum)]
    class: ClassArg,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long)]
    seed: Option<u64>,
    /// Override the class's multiplicative separation
    #[arg(long)]
    alpha: Option<f64>,
    /// Additive separation
    #[arg(long, default_value_t = 0.3)]
    beta: f64,
    /// Cap on the Fourier degree in additive mode
    #[arg(long)]
    degree_cap: Option<usize>,
    /// XOS constant c
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Curvature bound
    #[arg(long, default_value_t = 0.5)]
    kappa: f64,
    /// XOS-with-trees: number of trees
    #[arg(long, default_value_t = 2)]
    trees: usize,
    /// XOS-with-trees: trade-off exponent
    #[arg(long, default_value_t = 0.5)]
    xi: f64,
    /// Interaction degree
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// JSON list of element lists, e.g. [[],[0,1]]
    #[arg(long)]
    support_file: Option<PathBuf>,
    /// Coverage: accuracy of the 1+eps separation
    #[arg(long, default_value_t = 0.25)]
    coverage_eps: f64,
    #[arg(long)]
    landmarks: Option<usize>,
    #[arg(long)]
    train_size: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    sample_constant: f64,
    #[arg(long)]
    adjacent_only: bool,
    /// Per-element inclusion probability; uniform when absent
    #[arg(long)]
    product_p: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    comparator: PathBuf,
    /// Comma-separated 0-based elements of A
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    a: Vec<usize>,
    /// Comma-separated 0-based elements of B
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    b: Vec<usize>,
}

#[derive(Args)]
struct EvalArgs {
    comparator: PathBuf,
    function: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Score all ordered pairs instead of sampling
    #[arg(long)]
    exhaustive: bool,
    /// Multiplicative separation; defaults to the comparator's own
    #[arg(long)]
    alpha: Option<f64>,
    /// Append a CSV row here
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    spec: PathBuf,
    /// CSV output, one row per cell and seed
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Long-format CSV for plotting
    #[arg(long)]
    long: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Leave wall time empty so output is byte-reproducible
    #[arg(long)]
    no_timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum QueryLearner {
    Disjunction,
    Buckets,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(value_enum)]
    learner: QueryLearner,
    function: PathBuf,
    /// Range bound of the target
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Approximation factor; must divide 2k
    #[arg(long, default_value_t = 1)]
    alpha: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn need_seed(seed: Option<u64>) -> Result<u64> {
    seed.ok_or_else(|| Error::Input("--seed is required for this command".into()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn gen(a: GenArgs) -> Result<()> {
    let f = match (a.class, a.graph.as_deref()) {
        (GenClass::Cut, Some("path3")) => fixtures::p3_cut(),
        (GenClass::Cut, Some(other)) => return Err(Error::Input(format!("unknown canned graph {other:?}"))),
        (GenClass::Coverage, _) if !(a.density > 0.0 && a.density <= 1.0) => {
            return Err(Error::Input(format!("coverage density {} must lie in (0, 1]", a.density)))
        }
        (class, _) => {
            let n = a.n.ok_or_else(|| Error::Input("--n is required".into()))?;
            let seed = need_seed(a.seed)?;
            match class {
                GenClass::Coverage => {
                    let f = setfn::gen_coverage(n, a.universe, a.density, seed)?;
                    if a.normalize {
                        f.normalized()?
                    } else {
                        f
                    }
                }
                GenClass::Xos => setfn::gen_xos(n, a.trees, seed)?,
                GenClass::Cut => setfn::gen_graph_cut(n, a.edge_prob, seed)?,
                GenClass::Interaction => setfn::gen_interaction(n, a.k, seed)?,
                GenClass::Modular => setfn::gen_xos(n, 1, seed)?,
                GenClass::Disjunction => setfn::gen_disjunction(n, seed)?,
                GenClass::Kdnf => setfn::gen_kdnf(n, a.k, a.terms, seed)?,
            }
        }
    };
    write(&a.out, &f.to_json()?)?;
    println!("wrote {} function, n = {}", f.kind.tag(), f.n);
    let mode = if f.n <= setfn::MAX_VERIFY_N {
        CheckMode::Exhaustive
    } else {
        CheckMode::Sampled { trials: 20_000, seed: a.seed.unwrap_or(0) }
    };
    for (name, prop) in [
        ("monotone", ClassProperty::Monotone),
        ("submodular", ClassProperty::Submodular),
        ("subadditive", ClassProperty::Subadditive),
    ] {
        match setfn::verify_class(&f, prop, mode)? {
            Verdict::Pass => println!("{name}: verified"),
            Verdict::Fail(w) => println!("{name}: fails at A = {:?}, B = {:?}", w.a.elems(), w.b.elems()),
        }
    }
    Ok(())
}

fn class_tag(a: &TrainArgs, n: usize) -> Result<ClassTag> {
    Ok(match a.class {
        ClassArg::Modular => ClassTag::Modular,
        ClassArg::Submodular | ClassArg::SubmodularAdditive => ClassTag::Submodular,
        ClassArg::Xos => ClassTag::Xos { c: a.c },
        ClassArg::Subadditive => ClassTag::Subadditive,
        ClassArg::Curvature => ClassTag::Curvature { kappa: a.kappa },
        ClassArg::XosTrees => ClassTag::XosTrees { trees: a.trees, xi: a.xi },
        ClassArg::Interaction => ClassTag::Interaction { k: a.k },
        ClassArg::Fourier => {
            let path = a.support_file.as_ref().ok_or_else(|| Error::Input("--support-file is required".into()))?;
            let lists: Vec<Vec<usize>> = serde_json::from_str(&read(path)?)?;
            let support = lists.iter().map(|e| SubsetMask::from_elems(n, e)).collect::<Result<_>>()?;
            ClassTag::FourierSparse { support }
        }
        ClassArg::Cut => ClassTag::GraphCut,
        ClassArg::Coverage => ClassTag::Coverage { eps: a.coverage_eps },
    })
}

fn train(a: TrainArgs) -> Result<()> {
    let seed = need_seed(a.seed)?;
    let f = SetFunction::from_json(&read(&a.function)?)?;
    let oracle = ComparisonOracle::new(f.clone());
    let Trained { comparator, .. } = if let ClassArg::SubmodularAdditive = a.class {
        let mut cfg = TrainConfig::additive(a.eps, a.delta, a.beta, a.degree_cap, seed);
        apply_overrides(&mut cfg, &a);
        train_additive(&oracle, &cfg)?
    } else {
        let (map, declared) = select_map(&class_tag(&a, f.n)?, f.n)?;
        let mut cfg = TrainConfig::multiplicative(a.eps, a.delta, a.alpha.unwrap_or(declared), seed);
        apply_overrides(&mut cfg, &a);
        let dist = match a.product_p {
            Some(p) => SampleDistribution::Product { p },
            None => SampleDistribution::Uniform,
        };
        train_multiplicative(&oracle, &map, &cfg, dist)?
    };
    write(&a.out, &comparator.to_json()?)?;
    let p = &comparator.provenance;
    println!("feature map: {:?}, dim {}", comparator.feature_map.kind(), comparator.feature_map.dim());
    println!("landmarks m = {}", p.landmark_count);
    println!("training set |S2| = {}", p.train_size);
    println!("pairs admitted = {}, after pruning = {}", p.admitted_before_pruning, comparator.pairs.len());
    println!("oracle queries = {}", p.query_count);
    if let Some(add) = &p.additive {
        println!("gamma = {:.4e}, analysed degree k = {:.4e}, used degree = {}", add.gamma, add.analysed_degree, add.used_degree);
    }
    Ok(())
}

fn apply_overrides(cfg: &mut TrainConfig, a: &TrainArgs) {
    cfg.landmarks = a.landmarks;
    cfg.train_size = a.train_size;
    cfg.sample_constant = a.sample_constant;
    cfg.adjacent_only = a.adjacent_only;
}

fn predict(a: PredictArgs) -> Result<()> {
    let cmp = Comparator::from_json(&read(&a.comparator)?)?;
    let sa = SubsetMask::from_elems(cmp.n(), &a.a)?;
    let sb = SubsetMask::from_elems(cmp.n(), &a.b)?;
    println!("{}", u8::from(cmp.predict(&sa, &sb)?));
    Ok(())
}

fn eval(a: EvalArgs) -> Result<()> {
    let cmp = Comparator::from_json(&read(&a.comparator)?)?;
    let f = SetFunction::from_json(&read(&a.function)?)?;
    let rule = match cmp.provenance.config.mode {
        complearn::Mode::Multiplicative { alpha } => SeparationRule::Multiplicative { alpha: a.alpha.unwrap_or(alpha) },
        complearn::Mode::Additive { beta, .. } => SeparationRule::Additive { beta },
    };
    let est = if a.exhaustive {
        harness::measure_error_exhaustive(&cmp, &f, rule)?
    } else {
        harness::measure_error(&cmp, &f, SampleDistribution::Uniform, rule, a.trials, need_seed(a.seed)?)?
    };
    if est.vacuous {
        println!("conditional_error: vacuous (no separated pairs)");
    } else {
        println!("conditional_error: {:.6} (se {:.6})", est.conditional_error, est.standard_error);
    }
    let frac = if est.trials > 0 { est.separated_count as f64 / est.trials as f64 } else { 0.0 };
    println!("separated: {} of {} ({frac:.4})", est.separated_count, est.trials);
    println!("misses: {}", est.miss_count);
    println!("both_fire: {}", est.both_fire_count);
    if let Some(path) = a.csv {
        let exists = path.exists();
        let file = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let mut w = csv::WriterBuilder::new().has_headers(!exists).from_writer(file);
        w.serialize(&est)?;
        w.flush()?;
    }
    Ok(())
}

fn sweep(a: SweepArgs) -> Result<()> {
    let spec: SweepSpec = serde_json::from_str(&read(&a.spec)?)?;
    let rows = harness::run_sweep(&spec, SweepOptions { jobs: a.jobs, timing: !a.no_timing })?;
    let create = |p: &Path| fs::File::create(p).map_err(|e| Error::Input(format!("{}: {e}", p.display())));
    harness::write_csv(&rows, create(&a.out)?)?;
    if let Some(p) = &a.json {
        harness::write_json(&rows, create(p)?)?;
    }
    if let Some(p) = &a.long {
        harness::write_long_csv(&rows, create(p)?)?;
    }
    let failed = rows.iter().filter(|r| r.status != "ok").count();
    println!("{} rows written, {failed} not ok", rows.len());
    Ok(())
}

fn querylearn(a: QueryArgs) -> Result<()> {
    let f = SetFunction::from_json(&read(&a.function)?)?;
    let oracle = ComparisonOracle::new(f);
    match a.learner {
        QueryLearner::Disjunction => {
            let s = querylearn::learn_disjunction(&oracle)?;
            println!("support: {:?}", s.elems());
            println!("oracle queries = {}", oracle.queries());
            if let Some(out) = a.out {
                write(&out, &serde_json::to_string_pretty(&s)?)?;
            }
        }
        QueryLearner::Buckets => {
            let p = querylearn::learn_buckets_approx(&oracle, a.k, a.alpha)?;
            println!("subset size bound s = {}", p.subset_size_bound);
            println!("buckets = {}, subsets = {}", p.buckets.len(), p.num_subsets());
            println!("oracle queries = {}", p.query_count);
            if let Some(out) = a.out {
                write(&out, &serde_json::to_string_pretty(&p)?)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Gen(a) => gen(a),
        Cmd::Train(a) => train(a),
        Cmd::Predict(a) => predict(a),
        Cmd::Eval(a) => eval(a),
        Cmd::Sweep(a) => sweep(a),
        Cmd::Querylearn(a) => querylearn(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
