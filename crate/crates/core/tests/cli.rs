//! Drives the `complearn` binary end to end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use complearn::fixtures;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_complearn")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn help_lists_every_flag() {
    let expect: &[(&str, &[&str])] = &[
        ("gen", &["--n", "--seed", "--universe", "--density", "--normalize", "--trees", "--edge-prob", "--graph", "--k", "--terms", "--out"]),
        (
            "train",
            &[
                "--class", "--eps", "--delta", "--seed", "--alpha", "--beta", "--degree-cap", "--c", "--kappa", "--trees",
                "--xi", "--k", "--support-file", "--coverage-eps", "--landmarks", "--train-size", "--sample-constant",
                "--adjacent-only", "--product-p", "--out",
            ],
        ),
        ("predict", &["--a", "--b"]),
        ("eval", &["--trials", "--seed", "--exhaustive", "--alpha", "--csv"]),
        ("sweep", &["--out", "--json", "--long", "--jobs", "--no-timing"]),
        ("querylearn", &["--k", "--alpha", "--out"]),
    ];
    for (verb, flags) in expect {
        let help = ok(&[verb, "--help"]);
        for flag in *flags {
            assert!(help.contains(flag), "{verb} --help lacks {flag}");
        }
    }
}

#[test]
fn gen_reports_class_checks_and_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    let out = ok(&["gen", "coverage", "--n", "6", "--seed", "1", "--out", p(&f)]);
    assert!(out.contains("submodular: verified"), "{out}");
    assert!(out.contains("monotone: verified"));

    assert_eq!(run(&["gen", "coverage", "--n", "6", "--seed", "1", "--density", "0", "--out", p(&f)]).status.code(), Some(2));
    assert_eq!(run(&["gen", "coverage", "--n", "6", "--out", p(&f)]).status.code(), Some(2));

    let cut = dir.path().join("cut.json");
    let out = ok(&["gen", "cut", "--graph", "path3", "--out", p(&cut)]);
    assert!(out.contains("monotone: fails"), "{out}");
    assert!(out.contains("submodular: verified"));
}

#[test]
fn gen_train_eval_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let pipeline = |tag: &str| {
        let f = dir.path().join(format!("f{tag}.json"));
        let c = dir.path().join(format!("c{tag}.json"));
        ok(&["gen", "coverage", "--n", "8", "--seed", "3", "--universe", "20", "--out", p(&f)]);
        ok(&[
            "train", p(&f), "--class", "submodular", "--seed", "4", "--landmarks", "8", "--train-size", "500", "--out", p(&c),
        ]);
        let eval = ok(&["eval", p(&c), p(&f), "--trials", "2000", "--seed", "5"]);
        (fs::read(&f).unwrap(), fs::read(&c).unwrap(), eval)
    };
    let (f1, c1, e1) = pipeline("1");
    let (f2, c2, e2) = pipeline("2");
    assert_eq!(f1, f2);
    assert_eq!(c1, c2);
    assert_eq!(e1, e2);
    assert!(e1.contains("conditional_error"));
}

#[test]
fn uncapped_additive_reports_capacity() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    ok(&["gen", "coverage", "--n", "40", "--seed", "1", "--normalize", "--out", p(&f)]);
    let o = run(&["train", p(&f), "--class", "submodular-additive", "--seed", "1", "--out", p(&dir.path().join("c.json"))]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("k ="), "{err}");
}

#[test]
fn eval_guards_and_vacuous_output() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.json");
    let f3 = dir.path().join("f3.json");
    let f5 = dir.path().join("f5.json");
    fs::write(&c, fixtures::cov3_witness().to_json().unwrap()).unwrap();
    fs::write(&f3, fixtures::cov3().to_json().unwrap()).unwrap();
    ok(&["gen", "coverage", "--n", "5", "--seed", "1", "--out", p(&f5)]);

    assert_eq!(run(&["eval", p(&c), p(&f5), "--seed", "1"]).status.code(), Some(2));
    let out = ok(&["eval", p(&c), p(&f3), "--seed", "1", "--trials", "0"]);
    assert!(out.contains("vacuous"), "{out}");
}

#[test]
fn witness_comparator_exhaustive_eval_and_predict() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.json");
    let f = dir.path().join("f.json");
    fs::write(&c, fixtures::cov3_witness().to_json().unwrap()).unwrap();
    fs::write(&f, fixtures::cov3().to_json().unwrap()).unwrap();
    let out = ok(&["eval", p(&c), p(&f), "--exhaustive"]);
    assert!(out.contains("separated: 34 of 64"), "{out}");
    assert!(out.contains("misses: 10"));
    assert!(out.contains("both_fire: 0"));

    assert_eq!(ok(&["predict", p(&c), "--a", "0", "--b", "2"]).trim(), "1");
    assert_eq!(ok(&["predict", p(&c), "--a", "2", "--b", "0"]).trim(), "0");
    assert_eq!(ok(&["predict", p(&c), "--a", "--b", "0,1"]).trim(), "0");
    assert_eq!(run(&["predict", p(&c), "--a", "7", "--b", "0"]).status.code(), Some(2));
}

#[test]
fn querylearn_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("d.json");
    ok(&["gen", "disjunction", "--n", "7", "--seed", "2", "--out", p(&f)]);
    let out = ok(&["querylearn", "disjunction", p(&f)]);
    assert!(out.contains("oracle queries = 7"), "{out}");

    let k = dir.path().join("k.json");
    ok(&["gen", "kdnf", "--n", "5", "--k", "2", "--seed", "2", "--out", p(&k)]);
    let out = ok(&["querylearn", "buckets", p(&k), "--k", "2"]);
    assert!(out.contains("subset size bound s = 4"), "{out}");
    assert_eq!(run(&["querylearn", "buckets", p(&k), "--k", "2", "--alpha", "3"]).status.code(), Some(2));
}

#[test]
fn sweep_writes_csv_with_header() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        r#"{"name": "tiny", "target": {"family": "coverage", "universe": 15, "density": 0.3},
            "learner": {"learner": "multiplicative", "class": {"class": "submodular"}},
            "n_values": [6, 7], "eps": 0.2, "delta": 0.2, "landmarks": 5, "train_sizes": [150],
            "trials": 200, "seeds": [1, 2]}"#,
    )
    .unwrap();
    let out = dir.path().join("rows.csv");
    let long = dir.path().join("long.csv");
    let msg = ok(&["sweep", p(&spec), "--out", p(&out), "--long", p(&long), "--no-timing"]);
    assert!(msg.contains("4 rows written"), "{msg}");
    let text = fs::read_to_string(&out).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "sweep,cell,target,n,seed,degree_cap,landmarks,train_size,separation,trials,separated_count,miss_count,\
         conditional_error,standard_error,both_fire_count,query_count,pairs_admitted,pairs_kept,wall_ms,status"
    );
    assert_eq!(text.lines().count(), 5);
    assert!(fs::metadata(&long).unwrap().len() > 0);
}
