use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;
use sizebias::cli::run;

fn call(args: &[&str]) -> (i32, Vec<u8>, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(
        std::iter::once("sizebias").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, out, String::from_utf8(err).unwrap())
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

fn population_csv(dir: &Path) -> PathBuf {
    let path = dir.join("pop.csv");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "x,y").unwrap();
    for (x, y) in [
        (1.0, 2.0),
        (3.0, 1.0),
        (0.5, 4.0),
        (2.0, 2.5),
        (4.0, 3.0),
        (1.5, 0.5),
    ] {
        writeln!(f, "{x},{y}").unwrap();
    }
    path
}

fn invocations(csv: &str) -> Vec<Vec<String>> {
    let cases: &[&[&str]] = &[
        &["transform", "--dist", "poisson:2"],
        &["transform", "--dist", "exponential"],
        &["transform", "--dist", "geometric:0.4"],
        &["transform", "--dist", "0.2,0.3,0.5"],
        &[
            "sum",
            "--dist",
            "bernoulli:0.3",
            "--dist",
            "poisson:1",
            "--samples",
            "2000",
        ],
        &["sum", "--dist", "binomial:3,0.5", "--copies", "3"],
        &["product", "--dist", "dirac:2", "--dist", "0,0.5,0.5"],
        &[
            "compound-poisson",
            "--increment",
            "0,0.5,0.5",
            "--a",
            "1.5",
            "--n",
            "20",
        ],
        &["id-test", "--pmf", "0.25,0.5,0.25"],
        &["id-test", "--dist", "poisson:3"],
        &["dickman", "--a", "1"],
        &["buchstab", "--a", "1", "--b", "0.5"],
        &["orbit", "--b", "1.3", "--c", "2.718281828459045"],
        &[
            "stieltjes",
            "--m",
            "1",
            "--delta",
            "-0.5",
            "--sigma",
            "1",
            "--max-moment",
            "3",
        ],
        &["berg", "--s", "-1", "--c", "2"],
        &["mixture-check", "--c", "2.718281828459045"],
        &["midzuno", "--csv", csv, "--m", "3", "--exact"],
        &[
            "renewal",
            "--dist",
            "exponential",
            "--horizon",
            "100",
            "--n",
            "2000",
        ],
        &["skorohod", "--atoms", "-2:0.25,0:0.25,1:0.5"],
        &["stein", "--n", "10", "--p", "0.1"],
        &["stein", "--lambda", "2", "--gap", "0.05"],
        &[
            "concentration",
            "--a",
            "4",
            "--c",
            "1",
            "--x",
            "8",
            "--poisson",
        ],
        &[
            "concentration",
            "--a",
            "4",
            "--c",
            "1",
            "--x",
            "2",
            "--poisson",
        ],
    ];
    cases
        .iter()
        .map(|c| c.iter().map(|s| s.to_string()).collect())
        .collect()
}

#[test]
fn every_subcommand_matches_its_schema() {
    let dir = tempfile::tempdir().unwrap();
    let csv = population_csv(dir.path());
    let mut covered = std::collections::BTreeSet::new();
    for args in invocations(csv.to_str().unwrap()) {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, out, err) = call(&argv);
        assert_eq!(code, 0, "{argv:?}: {err}");
        let v: Value = serde_json::from_slice(&out).unwrap();
        let schema: Value = serde_json::from_str(
            &std::fs::read_to_string(schema_dir().join(format!("{}.json", argv[0]))).unwrap(),
        )
        .unwrap();
        let validator = jsonschema::validator_for(&schema).unwrap();
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{argv:?}: {errors:?}");
        covered.insert(argv[0].to_string());
    }
    assert_eq!(covered.len(), 16);
    assert_eq!(std::fs::read_dir(schema_dir()).unwrap().count(), 16);
}

#[test]
fn midzuno_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let csv = population_csv(dir.path());
    let args = [
        "midzuno",
        "--csv",
        csv.to_str().unwrap(),
        "--m",
        "3",
        "--seed",
        "7",
    ];
    let (c1, a, _) = call(&args);
    let (c2, b, _) = call(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["subset"].as_array().unwrap().len(), 3);
    let (_, other, _) = call(&[
        "midzuno",
        "--csv",
        csv.to_str().unwrap(),
        "--m",
        "3",
        "--seed",
        "8",
    ]);
    let w: Value = serde_json::from_slice(&other).unwrap();
    assert_eq!(w["seed"], 8);
}

#[test]
fn monte_carlo_is_deterministic_per_worker_count() {
    for workers in ["1", "3"] {
        let args = [
            "--workers",
            workers,
            "renewal",
            "--dist",
            "exponential",
            "--horizon",
            "60",
            "--n",
            "3000",
        ];
        assert_eq!(call(&args).1, call(&args).1);
    }
    let one = call(&[
        "--seed",
        "5",
        "sum",
        "--dist",
        "poisson:1",
        "--samples",
        "500",
    ])
    .1;
    let two = call(&[
        "--seed",
        "6",
        "sum",
        "--dist",
        "poisson:1",
        "--samples",
        "500",
    ])
    .1;
    assert_ne!(one, two);
}

#[test]
fn id_test_reports_binomial_witness() {
    let (code, out, _) = call(&["id-test", "--pmf", "0.25,0.5,0.25"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["is_id"], Value::Bool(false));
    assert_eq!(v["witness_index"], 2);
    assert_eq!(v["witness_mass"], -2.0);
}

#[test]
fn out_flag_and_csv_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let (code, out, _) = call(&[
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
        "concentration",
        "--a",
        "4",
        "--c",
        "1",
        "--x",
        "8",
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("key,value\n"));
    assert!(text.contains("side,upper"));
}

#[test]
fn distribution_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    std::fs::write(&path, r#"{"atoms": [[1, 0.5], [3, 0.5]]}"#).unwrap();
    let arg = format!("@{}", path.display());
    let (code, out, err) = call(&["transform", "--dist", &arg]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["biased_mean"], 2.5);
}

#[test]
fn validation_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "x,y\n1,2\n3,oops\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["midzuno", "--csv", bad.to_str().unwrap(), "--m", "1"],
        vec!["midzuno", "--csv", "/nonexistent/pop.csv", "--m", "1"],
        vec!["id-test"],
        vec!["transform", "--dist", "poisson"],
        vec!["transform", "--dist", "@/nonexistent.json"],
        vec!["renewal", "--dist", "exponential", "--horizon", "10"],
        vec!["skorohod", "--atoms", "-1:0.5,2:0.5"],
        vec!["dickman", "--a", "1", "--h", "0.01"],
        vec!["concentration", "--a", "4", "--c", "1", "--x", "0"],
        vec!["--workers", "0", "stein", "--n", "3", "--p", "0.2"],
        vec!["stein", "--n", "3"],
    ];
    for args in cases {
        let (code, out, err) = call(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty() && !err.is_empty(), "{args:?}");
    }
}
