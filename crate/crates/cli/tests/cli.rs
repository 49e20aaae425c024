//! End-to-end tests of the `fewrows` binary: exit codes, report formats,
//! generator determinism, and the benchmark CSV contract.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use fewrows_cli::report::RunReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fewrows"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn write_file(dir: &tempfile::TempDir, name: &str, contents: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_reports_optimal_value_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(&dir, "ex.ilp", "1 1\n1\n5\n2\n");
    let out = run(&["solve", &file]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("status: optimal"), "{text}");
    assert!(text.contains("value: 10"), "{text}");
}

#[test]
fn feasible_exits_one_on_parity_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(&dir, "inf.ilp", "1 1\n2\n3\n");
    let out = run(&["feasible", &file]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("status: infeasible"));
}

#[test]
fn unbounded_instance_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(&dir, "unb.ilp", "1 2\n1 -1\n0\n1 1\n");
    let out = run(&["solve", &file]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("status: unbounded"));
}

#[test]
fn conv_strategy_with_h_override_matches_default() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(&dir, "ex.ilp", "2 3\n2 3 1\n1 0 2\n25 17\n4 1 7\n");
    let default = run(&["solve", "--json", &file]);
    let forced = run(&["solve", "--json", "--strategy", "conv", "--H", "9/2", &file]);
    assert_eq!(default.status.code(), forced.status.code());
    let a: RunReport = serde_json::from_str(&stdout(&default)).unwrap();
    let b: RunReport = serde_json::from_str(&stdout(&forced)).unwrap();
    assert_eq!(a.status, b.status);
    assert_eq!(a.value, b.value);
    assert_eq!(b.h_value.as_deref(), Some("9/2"));
    assert_eq!(b.h_provenance.as_deref(), Some("user-supplied"));
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(&dir, "ex.ilp", "1 1\n1\n5\n2\n");
    let out = run(&["solve", "--json", &file]);
    let text = stdout(&out);
    let report: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.value, Some(10));
    assert_eq!(report.witness, Some(vec![5]));
    let again: RunReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(again, report);
}

#[test]
fn proximity_toggle_does_not_change_the_answer() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(&dir, "big.ilp", "1 2\n3 7\n1000001\n2 5\n");
    let off = run(&["solve", "--json", &file]);
    let on = run(&["solve", "--json", "--proximity", "on", &file]);
    assert_eq!(off.status.code(), Some(0));
    assert_eq!(on.status.code(), Some(0));
    let a: RunReport = serde_json::from_str(&stdout(&off)).unwrap();
    let b: RunReport = serde_json::from_str(&stdout(&on)).unwrap();
    assert_eq!(a.value, b.value);
    assert!(b.proximity);
    // The reduction leaves a right-hand side bounded by the matrix data, so
    // far fewer levels than the million-scale direct run.
    assert!(b.levels.unwrap() < a.levels.unwrap());
}

#[test]
fn generator_is_deterministic_and_output_solves() {
    let first = run(&["gen", "uks1", "--seed", "9", "--capacity", "200"]);
    let second = run(&["gen", "uks1", "--seed", "9", "--capacity", "200"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));

    let dir = tempfile::tempdir().unwrap();
    let file = write_file(&dir, "gen.ilp", &stdout(&first));
    let solved = run(&["solve", &file]);
    // A random exact knapsack may be infeasible, but never an error.
    assert!(matches!(solved.status.code(), Some(0) | Some(1)));
}

#[test]
fn gen_writes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.ilp");
    let out = run(&["gen", "ksum", "--seed", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("1 "), "packed k-SUM is single-row: {text}");
}

#[test]
fn usage_data_and_capacity_exit_codes() {
    let out = run(&["solve", "--no-such-flag", "x.ilp"]);
    assert_eq!(out.status.code(), Some(64));

    let dir = tempfile::tempdir().unwrap();
    let bad = write_file(&dir, "bad.ilp", "garbage\n");
    assert_eq!(run(&["solve", &bad]).status.code(), Some(65));

    let ok = write_file(&dir, "ok.ilp", "1 1\n1\n5\n2\n");
    let out = run(&["solve", "--budget-bytes", "100", &ok]);
    assert_eq!(out.status.code(), Some(66));

    let missing = dir.path().join("missing.ilp");
    let out = run(&["solve", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(66));

    let out = run(&["gen", "ksum", "--k", "1"]);
    assert_eq!(out.status.code(), Some(64), "k-SUM needs two sets");
}

#[test]
fn stdin_dash_reads_the_instance() {
    let mut child = bin()
        .args(["solve", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"1 1\n1\n5\n2\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("value: 10"));
}

#[test]
fn bench_emits_strategy_rows_per_family() {
    let out = run(&["bench", "--families", "random", "--repeats", "1", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "family,m,delta,b_inf,strategy,wall_micros,table_cells,levels"
    );
    assert_eq!(lines.len(), 7, "{text}");
    for strategy in ["naive", "conv", "auto"] {
        assert_eq!(
            lines.iter().filter(|l| l.contains(strategy)).count(),
            2,
            "two sizes for {strategy}"
        );
    }
}

#[test]
fn schedule_assigns_every_job_once() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(&dir, "jobs.txt", "# demo\n3 1/4\n10\n6\n4\n12\n4\n2\n");
    let out = run(&["schedule", "--json", &file]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let jobs = [10i64, 6, 4, 12, 4, 2];
    let assignment = report["assignment"].as_array().unwrap();
    assert_eq!(assignment.len(), 3);
    let mut seen = vec![false; jobs.len()];
    let mut max_load = 0i64;
    for machine in assignment {
        let mut load = 0i64;
        for j in machine.as_array().unwrap() {
            let j = j.as_u64().unwrap() as usize;
            assert!(!seen[j], "job {j} assigned twice");
            seen[j] = true;
            load += jobs[j];
        }
        max_load = max_load.max(load);
    }
    assert!(seen.iter().all(|&s| s));
    assert_eq!(report["makespan"].as_i64().unwrap(), max_load);
    // Optimum is 14 here; (1+eps)^3 * 14 < 28 bounds the approximation.
    assert!(max_load <= 27);
}
