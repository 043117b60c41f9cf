//! End-to-end tests of the `semjd` binary: artifact layout, determinism,
//! exit codes, and the printed tables.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn semjd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semjd"))
}

fn run(args: &[&str]) -> Output {
    semjd().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn toy_campaign_path() -> String {
    format!(
        "{}/../mc-harness/configs/campaign_toy.json",
        env!("CARGO_MANIFEST_DIR")
    )
}

#[test]
fn simulate_writes_the_expected_csv_shape() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out_dir = dir.path().join("sim");
    let out = run(&[
        "simulate",
        "--true-model",
        "benchmark",
        "--n",
        "1000",
        "--seed",
        "7",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));

    let csv = fs::read_to_string(out_dir.join("path.csv")).expect("path.csv");
    let lines: Vec<&str> = csv.lines().collect();
    // Header plus n + 1 sample points.
    assert_eq!(lines.len(), 1002);
    assert_eq!(lines[0], "t,x1,x2,x3,x4,x5,x6,x7,x8,x9,x10,x11,x12");
    for line in &lines {
        assert_eq!(line.split(',').count(), 13);
    }
    assert!(out_dir.join("design.json").exists());
}

#[test]
fn simulate_a_single_increment_yields_two_sample_points() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out_dir = dir.path().join("sim");
    let out = run(&[
        "simulate",
        "--true-model",
        "benchmark",
        "--n",
        "1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let csv = fs::read_to_string(out_dir.join("path.csv")).expect("path.csv");
    assert_eq!(csv.lines().count(), 3); // header + X(0) + X(T)
}

#[test]
fn simulate_is_deterministic_in_the_seed() {
    let dir = tempfile::tempdir().expect("tempdir");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out_dir in [&a, &b] {
        let out = run(&[
            "simulate",
            "--true-model",
            "benchmark",
            "--n",
            "200",
            "--seed",
            "42",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "stderr: {}", stderr(&out));
    }
    let bytes_a = fs::read(a.join("path.csv")).expect("a/path.csv");
    let bytes_b = fs::read(b.join("path.csv")).expect("b/path.csv");
    assert_eq!(bytes_a, bytes_b, "same seed must reproduce the file byte for byte");
}

#[test]
fn check_ident_reports_full_rank_for_the_first_bundled_model() {
    let out = run(&["check-ident", "--model", "model1"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert!(
        stdout(&out).contains("rank 26 / q 26: identified"),
        "stdout: {}",
        stdout(&out)
    );
}

#[test]
fn fit_exits_3_when_the_filter_keeps_nothing() {
    let dir = tempfile::tempdir().expect("tempdir");
    let sim_dir = dir.path().join("sim");
    let out = run(&[
        "simulate",
        "--true-model",
        "benchmark",
        "--n",
        "50",
        "--out",
        sim_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));

    let data = sim_dir.join("path.csv");
    let fit_dir = dir.path().join("fit");
    let out = run(&[
        "fit",
        "--data",
        data.to_str().unwrap(),
        "--model",
        "model1",
        "--filter",
        "1e-12,0.4",
        "--init",
        "truth",
        "--out",
        fit_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
    let msg = stderr(&out);
    assert!(msg.contains("kept no increments"), "stderr: {msg}");
    assert!(msg.contains("threshold"), "stderr: {msg}");
}

#[test]
fn missing_input_files_exit_2() {
    let out = run(&["fit", "--data", "/nonexistent/path.csv", "--model", "model1"]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
}

#[test]
fn select_ranks_the_bundled_models_and_writes_the_report() {
    let dir = tempfile::tempdir().expect("tempdir");
    let sim_dir = dir.path().join("sim");
    let out = run(&[
        "simulate",
        "--true-model",
        "benchmark",
        "--n",
        "1000",
        "--seed",
        "7",
        "--out",
        sim_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));

    let data = sim_dir.join("path.csv");
    let sel_dir = dir.path().join("sel");
    let out = run(&[
        "select",
        "--data",
        data.to_str().unwrap(),
        "--models",
        "model1",
        "model2",
        "model3",
        "--init",
        "truth",
        "--out",
        sel_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let table = stdout(&out);
    assert!(table.contains("model1"), "stdout: {table}");
    assert!(table.contains("<=="), "stdout: {table}");

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(sel_dir.join("selection.json")).unwrap())
            .expect("selection.json parses");
    assert!(report.get("selectedId").is_some());
    assert_eq!(report["models"].as_array().map(|a| a.len()), Some(3));
}

#[test]
fn help_lists_every_subcommand() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for sub in ["simulate", "fit", "select", "mc", "bias", "normality", "check-ident"] {
        assert!(text.contains(sub), "--help must mention {sub}: {text}");
    }
}

#[test]
fn mc_rows_are_byte_identical_across_reruns_and_thread_counts() {
    let dir = tempfile::tempdir().expect("tempdir");
    let campaign = toy_campaign_path();
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for (out_name, threads) in [("a", "1"), ("b", "1"), ("c", "3")] {
        let out_dir = dir.path().join(out_name);
        let out = run(&[
            "mc",
            "--campaign",
            &campaign,
            "--reps",
            "3",
            "--n",
            "400",
            "--threads",
            threads,
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "stderr: {}", stderr(&out));
        rows.push(fs::read(out_dir.join("rows.csv")).expect("rows.csv"));

        let summary: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap())
                .expect("summary.json parses");
        for key in [
            "config",
            "estimatorSummary",
            "selectionCounts",
            "replicatesWithSelection",
            "wallTimeSeconds",
        ] {
            assert!(summary.get(key).is_some(), "summary.json missing {key}");
        }
    }
    assert_eq!(rows[0], rows[1], "rerunning the campaign must not change rows.csv");
    assert_eq!(rows[0], rows[2], "the thread count must not change rows.csv");
}
