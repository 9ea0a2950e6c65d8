//! End-to-end runs of the `likesim` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn likesim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_likesim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn likesim_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_likesim"))
        .env("LIKESIM_THREADS", threads)
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_writes_one_line_per_network() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nets.jsonl");
    let o = likesim(&["generate", "--count", "2", "--n", "10", "--m", "2", "--seed", "7", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 2);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["edges"].as_array().unwrap().len(), 17);
        assert_eq!(v["rates"].as_array().unwrap().len(), 34);
    }
}

#[test]
fn usage_errors_exit_one() {
    let o = likesim(&["generate", "--count", "2", "--n", "10", "--m", "2", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nets.jsonl");
    let o = likesim(&["generate", "--count", "1", "--n", "2", "--m", "2", "--seed", "7", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());

    assert_eq!(likesim(&["no-such-command"]).status.code(), Some(1));
}

fn solve_json(dir: &Path, body: &str, extra: &[&str]) -> Output {
    let input = dir.join("net.json");
    fs::write(&input, body).unwrap();
    let mut args = vec!["solve", "--input", path_str(&input)];
    args.extend_from_slice(extra);
    likesim(&args)
}

#[test]
fn solve_two_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let o = solve_json(dir.path(), r#"{"edges": [[0, 1]], "rates": [[0, 1, 0.7], [1, 0, 0.3]]}"#, &[]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let lc: Vec<f64> = serde_json::from_value(v["lc"].clone()).unwrap();
    assert!((lc[0] - 0.7).abs() < 1e-12 && (lc[1] - 0.3).abs() < 1e-12);
    assert!((v["prestige"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["converged"], true);
}

#[test]
fn solve_iteration_cap_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"{"edges": [[0, 1], [0, 2], [1, 2]],
        "rates": [[0, 1, 0.3], [0, 2, 0.8], [1, 0, 0.15], [1, 2, 0.9], [2, 0, 0.55], [2, 1, 0.05]]}"#;
    let o = solve_json(dir.path(), body, &["--max-iters", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["converged"], false);
}

#[test]
fn solve_rejects_out_of_range_rate() {
    let dir = tempfile::tempdir().unwrap();
    let o = solve_json(dir.path(), r#"{"edges": [[0, 1]], "rates": [[0, 1, 1.5], [1, 0, 0.3]]}"#, &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1.5"));
}

fn experiment(dir: &Path, threads: &str) -> Output {
    likesim_threads(
        threads,
        &[
            "experiment", "--count", "3000", "--seed", "11", "--quantile", "0.02",
            "--out-dir", path_str(dir),
        ],
    )
}

#[test]
fn experiment_is_independent_of_thread_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let oa = experiment(a.path(), "1");
    let ob = experiment(b.path(), "4");
    assert_eq!(oa.status.code(), Some(0), "{}", String::from_utf8_lossy(&oa.stderr));
    assert_eq!(ob.status.code(), Some(0));
    assert_eq!(oa.stdout, ob.stdout);
    for name in ["samples.jsonl", "summary.json"] {
        let fa = fs::read(a.path().join(name)).unwrap();
        let fb = fs::read(b.path().join(name)).unwrap();
        assert!(fa == fb, "{name} differs between thread counts");
    }
    assert_eq!(fs::read_to_string(a.path().join("samples.jsonl")).unwrap().lines().count(), 3000);
}

#[test]
fn analyze_emits_tables_and_figures() {
    let data = tempfile::tempdir().unwrap();
    assert_eq!(experiment(data.path(), "2").status.code(), Some(0));

    let out = tempfile::tempdir().unwrap();
    let o = likesim(&[
        "analyze", "--in-dir", path_str(data.path()), "--out-dir", path_str(out.path()), "--emit-svg",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for name in [
        "give_rates.csv", "regressions.csv", "delta_hist.csv", "epsilon_hist.csv",
        "clustering_diff.csv", "diameter_prestige.csv", "modes.csv",
    ] {
        assert!(out.path().join(name).exists(), "missing {name}");
    }
    let svgs = fs::read_dir(out.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "svg"))
        .count();
    assert_eq!(svgs, 5);
    let leftovers = fs::read_dir(out.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "tmp"))
        .count();
    assert_eq!(leftovers, 0);
}

#[test]
fn whole_ensemble_selection_has_no_clustering_difference() {
    let data = tempfile::tempdir().unwrap();
    assert_eq!(experiment(data.path(), "2").status.code(), Some(0));
    let out = tempfile::tempdir().unwrap();
    let o = likesim(&[
        "analyze", "--in-dir", path_str(data.path()), "--out-dir", path_str(out.path()),
        "--quantile", "0.99999",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.path().join("clustering_diff.csv")).unwrap();
    let mut defined = 0;
    for line in csv.lines().skip(1) {
        let pd = line.rsplit(',').next().unwrap();
        if pd != "undefined" {
            assert_eq!(pd.parse::<f64>().unwrap(), 0.0, "{line}");
            defined += 1;
        }
    }
    assert!(defined > 0);
}

#[test]
fn analyze_without_summary_fails() {
    let empty = tempfile::tempdir().unwrap();
    let o = likesim(&["analyze", "--in-dir", path_str(empty.path())]);
    assert_eq!(o.status.code(), Some(1));
}
