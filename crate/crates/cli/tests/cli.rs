//! End-to-end tests driving the compiled binary.

use std::process::{Command, Output};
use std::time::Instant;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zpdisc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stdout_json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout_str(&out)).unwrap()
}

#[test]
fn discrepancy_example_reports_a_quarter() {
    let json = stdout_json(&[
        "discrepancy",
        "--p",
        "2",
        "--precision",
        "8",
        "--linear",
        "a=1,b=0",
        "--n",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(json["value"], "1/4");
    assert_eq!(json["N"], 4);
    assert_eq!(json["K"], 8);
}

#[test]
fn l2norm_example_is_two_twenty_firsts() {
    let json = stdout_json(&[
        "l2norm",
        "--p",
        "2",
        "--explicit",
        "0",
        "--n",
        "1",
        "--precision",
        "8",
    ]);
    assert_eq!(json["l2_norm_sq"], "2/21");
}

#[test]
fn weyl_example_matches_the_cube_root_of_unity() {
    let json = stdout_json(&[
        "weyl", "--p", "3", "--linear", "a=1,b=0", "--n", "4", "--trunc", "1",
    ]);
    let entries = json["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0]["character"], "3^1:1");
    let re = entries[0]["re"].as_f64().unwrap();
    let im = entries[0]["im"].as_f64().unwrap();
    assert!((re - (-0.125)).abs() < 1e-12);
    assert!((im - 3f64.sqrt() / 8.0).abs() < 1e-12);
}

#[test]
fn bound_example_dominates_the_floor() {
    let json = stdout_json(&[
        "bound",
        "--p",
        "2",
        "--linear",
        "a=1,b=0",
        "--n",
        "1024",
        "--precision",
        "14",
        "--trunc",
        "14",
    ]);
    assert!(json["bound"].as_f64().unwrap() >= 1.0 / 1024.0);
}

#[test]
fn missing_p_with_linear_is_a_usage_error() {
    let out = run(&["discrepancy", "--linear", "a=1,b=0", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--p"));
}

#[test]
fn conflicting_sources_are_a_usage_error() {
    let out = run(&[
        "discrepancy",
        "--p",
        "2",
        "--linear",
        "a=1,b=0",
        "--explicit",
        "1",
        "--n",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_linear_is_a_usage_error() {
    let out = run(&["discrepancy", "--p", "2", "--linear", "a=1;b=0", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_prefix_is_a_usage_error() {
    let out = run(&["discrepancy", "--p", "2", "--explicit", "0,1", "--n", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_emits_the_pinned_header_rows_and_slope() {
    let out = run(&[
        "scan",
        "--p",
        "2",
        "--linear",
        "a=1,b=0",
        "--n-start",
        "16",
        "--n-end",
        "1024",
        "--precision",
        "12",
        "--trunc",
        "12",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,discrepancy,bound,ratio,runtime_ms");
    let data = &lines[1..lines.len() - 1];
    assert_eq!(data.len(), 7);
    for row in data {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 5);
        let n: f64 = fields[0].parse().unwrap();
        let d: f64 = fields[1].parse().unwrap();
        let ratio: f64 = fields[3].parse().unwrap();
        assert!((d - 1.0 / n).abs() < 1e-12, "discrepancy column is 1/N");
        assert!(ratio >= 1.0, "bound/discrepancy stays above one");
    }
    let trailer = lines.last().unwrap();
    assert!(trailer.starts_with("# slope="));
    assert!(trailer.contains("residual="));
    let slope: f64 = trailer
        .split("slope=")
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((-0.8..=-0.2).contains(&slope));
}

#[test]
fn scan_is_reproducible_outside_the_runtime_column() {
    let args = [
        "scan",
        "--p",
        "2",
        "--random-seed",
        "99",
        "--n-start",
        "8",
        "--n-end",
        "64",
        "--precision",
        "10",
        "--trunc",
        "10",
    ];
    let strip = |text: String| -> Vec<String> {
        text.lines()
            .map(|l| {
                if l.starts_with('#') || l.starts_with('N') {
                    l.to_string()
                } else {
                    l.rsplit_once(',').unwrap().0.to_string()
                }
            })
            .collect()
    };
    let a = strip(stdout_str(&run(&args)));
    let b = strip(stdout_str(&run(&args)));
    assert_eq!(a, b);
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let args = [
        "discrepancy",
        "--p",
        "3",
        "--random-seed",
        "5",
        "--n",
        "40",
        "--precision",
        "6",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn sequence_files_feed_every_command() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq.txt");
    std::fs::write(&path, "p=2 K=2\n# three residues\n0\n1\n2\n").unwrap();
    let path = path.to_str().unwrap();
    let json = stdout_json(&["discrepancy", "--input", path]);
    assert_eq!(json["value"], "1/3");
    let json = stdout_json(&["discrepancy", "--input", path, "--n", "2"]);
    assert_eq!(json["value"], "1/2");
    let out = run(&["discrepancy", "--input", path, "--p", "3"]);
    assert_eq!(out.status.code(), Some(2), "contradicting --p is rejected");
    let json = stdout_json(&["bound", "--input", path, "--trunc", "2"]);
    assert!(json["bound"].as_f64().unwrap() > 0.0);
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let base = [
        "l2norm",
        "--p",
        "2",
        "--explicit",
        "0,3,5,6",
        "--precision",
        "3",
    ];
    let stdout_run = run(&base);
    let mut with_out: Vec<&str> = base.to_vec();
    with_out.push("--out");
    with_out.push(path.to_str().unwrap());
    let out = run(&with_out);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout_run.stdout);
}

#[test]
fn weyl_csv_lists_characters_per_row() {
    let out = run(&[
        "weyl", "--p", "3", "--linear", "a=1,b=0", "--n", "4", "--trunc", "1", "--format", "csv",
    ]);
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "character,re,im");
    assert!(lines[1].starts_with("3^1:1,"));
    assert!(lines[2].starts_with("3^1:2,"));
}

#[test]
fn verify_all_passes_within_a_minute() {
    let start = Instant::now();
    let out = run(&["verify", "--suite", "all", "--p", "2", "--seed", "7"]);
    let elapsed = start.elapsed();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.lines().filter(|l| l.starts_with("pass")).count(), 7);
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(json
        .as_array()
        .unwrap()
        .iter()
        .all(|o| o["passed"].as_bool().unwrap()));
}

#[test]
fn verify_rejects_unknown_suites() {
    let out = run(&["verify", "--suite", "bogus", "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
}
