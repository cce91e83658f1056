use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn analogy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_analogy")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn lines(path: &Path) -> usize {
    std::fs::read_to_string(path).unwrap().lines().filter(|l| !l.trim().is_empty()).count()
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = analogy(&["train", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn gradcheck_passes_with_a_fixed_seed() {
    let o = analogy(&["gradcheck", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let err: f64 = out
        .split_whitespace()
        .skip_while(|w| *w != "error")
        .nth(1)
        .and_then(|w| w.parse().ok())
        .unwrap_or_else(|| panic!("no error value in {out:?}"));
    assert!(err < 1e-4);
}

#[test]
fn evaluate_without_checkpoint_names_the_path() {
    let dir = tempdir().unwrap();
    let o = analogy(&["evaluate", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let expected = dir.path().join("checkpoint.json");
    assert!(stderr(&o).contains(&format!("missing input file {}", expected.display())), "{}", stderr(&o));
}

#[test]
fn synth_writes_the_requested_corpus() {
    let dir = tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = analogy(&["synth", "--out-dir", d, "--purpose-pools", "4", "--mechanism-pools", "3", "--products", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(lines(&dir.path().join("corpus.jsonl")), 600);
    assert_eq!(lines(&dir.path().join("annotations.jsonl")), 600 * 4);
    assert!(lines(&dir.path().join("labels.jsonl")) > 0);
}

#[test]
fn pipeline_runs_end_to_end() {
    let dir = tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let run = |args: &[&str]| {
        let mut full = args.to_vec();
        full.extend(["--out-dir", d]);
        let o = analogy(&full);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        stdout(&o)
    };
    run(&["synth", "--products", "8", "--seed", "2"]);
    run(&["targets"]);
    run(&["train", "--hidden", "8", "--epochs", "3"]);
    run(&["predict"]);
    let report = run(&["interpret", "--id", "syn03", "--kind", "mechanism"]);
    assert!(report.contains("Sparse coding"));
    run(&["query", "--id", "syn03", "--threshold", "0.0"]);
    run(&["evaluate"]);
    run(&["inspire", "--clusters", "6", "--seeds", "2", "--inspirations", "2"]);
    let csv = std::fs::read_to_string(dir.path().join("evaluation.csv")).unwrap();
    assert!(csv.starts_with("method,level_percent,top,precision,recall"));
    assert!(csv.contains("tfidf-cosine"));
}

#[test]
fn ingest_refuses_to_overwrite_its_input() {
    let dir = tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert!(analogy(&["synth", "--products", "2", "--out-dir", d]).status.success());
    let corpus = dir.path().join("corpus.jsonl");
    let before = std::fs::read(&corpus).unwrap();
    let o = analogy(&["ingest", "--out-dir", d, "--corpus", corpus.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert_eq!(std::fs::read(&corpus).unwrap(), before);
}
