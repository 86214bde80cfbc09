use std::path::Path;
use std::process::{Command, Output};

use dehornoy::linalg::IntPolynomial;
use dehornoy::verify::CharPolyRecord;

fn dehornoy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dehornoy"))
        .args(args)
        .env_remove("DEHORNOY_CACHE_DIR")
        .env_remove("DEHORNOY_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn divides_base_case() {
    let o = dehornoy(&["verify", "divides", "--n", "1", "--no-cache"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("quotient x - 1"), "{}", stdout(&o));
}

#[test]
fn count_example() {
    let o = dehornoy(&["count", "--n", "3", "--length", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "19\n");
}

#[test]
fn zero_degree_is_a_usage_error() {
    let o = dehornoy(&["charpoly", "--n", "0", "--no-cache"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn budget_exit_code() {
    let o = dehornoy(&["charpoly", "--n", "5", "--no-cache", "--max-n-budget", "4"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("error[budget-exceeded]:"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn invalid_argument_exit_code() {
    let o = dehornoy(&["verify", "surjective", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn charpoly_json_round_trip() {
    let o = dehornoy(&["charpoly", "--n", "3", "--format", "json", "--no-cache"]);
    assert_eq!(o.status.code(), Some(0));
    let rec = CharPolyRecord::from_json(stdout(&o).trim()).unwrap();
    assert_eq!(rec.n, 3);
    assert_eq!(rec.degree, 6);
    assert_eq!(rec.coeffs, IntPolynomial::from_i64(&[0, 0, 0, -2, 5, -4, 1]));
}

#[test]
fn matrix_formats() {
    let text = stdout(&dehornoy(&["matrix", "--n", "2"]));
    assert_eq!(text, "1 0\n1 1\n");
    let csv = stdout(&dehornoy(&["matrix", "--n", "2", "--format", "csv"]));
    assert_eq!(csv, "1,0\n1,1\n");
    let json = stdout(&dehornoy(&["matrix", "--n", "3", "--format", "json"]));
    let rows: Vec<Vec<u8>> = serde_json::from_str(&json).unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0], vec![1, 0, 0, 0, 0, 0]);
    assert_eq!(rows[5], vec![1; 6]);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("count.json");
    let o = dehornoy(&[
        "count",
        "--n",
        "3",
        "--length",
        "3",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["count"], "48");
}

fn cached_run(dir: &Path, args: &[&str]) -> Output {
    let mut all = args.to_vec();
    all.extend(["--cache-dir", dir.to_str().unwrap()]);
    dehornoy(&all)
}

#[test]
fn cache_hit_and_miss_agree() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "divides", "--n", "3", "--format", "json"];
    let miss = cached_run(dir.path(), &args);
    assert!(dir.path().join("charpoly-n4-order1-algo1.json").exists());
    let hit = cached_run(dir.path(), &args);
    let mut uncached = args.to_vec();
    uncached.push("--no-cache");
    let fresh = dehornoy(&uncached);
    assert_eq!(miss.status.code(), Some(0));
    assert_eq!(miss.stdout, hit.stdout);
    assert_eq!(miss.stdout, fresh.stdout);
}

#[test]
fn corrupt_cache_entry_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("charpoly-n2-order1-algo1.json"), "{").unwrap();
    let o = cached_run(dir.path(), &["charpoly", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x^2 - 2x + 1\n");
}

#[test]
fn thread_count_does_not_change_output() {
    for args in [
        vec!["verify", "commute", "--n", "5", "--format", "json"],
        vec!["verify", "commute", "--n", "7", "--sample", "20", "--seed", "3"],
        vec!["count", "--n", "5", "--length", "4"],
    ] {
        let one = dehornoy(&[args.as_slice(), &["--threads", "1"]].concat());
        let eight = dehornoy(&[args.as_slice(), &["--threads", "8"]].concat());
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(one.stdout, eight.stdout, "{args:?}");
    }
}
