// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rankstair_cli::commands::cmd_simulate;
use rankstair_cli::{ExperimentConfig, Setup};
use rankstair_core::{matrix, rmx, FieldTower};

const TINY: &str = "\
scheme = staircase-gabidulin
p = 2
s = 1
m = 4
n = 4
k1 = 2
k2 = 1
D = 3,4
trials = 20
seed = 5
";

fn run(dir: &Path, args: &[&str]) -> Output {
    let config = dir.join("tiny.conf");
    fs::write(&config, TINY).unwrap();
    Command::new(env!("CARGO_BIN_EXE_rankstair"))
        .args(args)
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap()
}

#[test]
fn plan_writes_report_and_descriptor() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["plan"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("out/plan.json")).unwrap()).unwrap();
    assert_eq!(json["plan"]["alpha"], 3);
    assert_eq!(json["rate"]["numerator"], 1);
    let stc = fs::read_to_string(dir.path().join("out/plan.stc")).unwrap();
    assert!(stc.starts_with("STC1 "));
}

#[test]
fn simulate_writes_summary_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["simulate"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let summary = fs::read_to_string(dir.path().join("out/simulate.summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
    let trace = fs::read_to_string(dir.path().join("out/simulate.trace.jsonl")).unwrap();
    assert_eq!(trace.lines().count(), 40);
    for line in trace.lines() {
        let rec: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(rec["outcome"], "success");
    }
}

#[test]
fn encode_then_decode_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["encode"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let tower = FieldTower::new(2, 1, 4, None).unwrap();
    let a = matrix::identity(tower.base(), 4).select_rows(&[0, 2, 3]);
    let codeword = rmx::read_ext_matrix_in(&tower, &fs::read_to_string(dir.path().join("out/codeword.rmx")).unwrap())
        .unwrap();
    let received = rankstair_core::phi::matmul_mixed(&tower, &codeword, &a).unwrap();
    fs::write(dir.path().join("y.rmx"), rmx::write_ext_matrix(&tower, &received)).unwrap();
    fs::write(dir.path().join("a.rmx"), rmx::write_base_matrix(tower.base(), &a).unwrap()).unwrap();
    let y = dir.path().join("y.rmx");
    let a = dir.path().join("a.rmx");
    let out = run(dir.path(), &["decode", "--received", y.to_str().unwrap(), "--transfer", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let secret = fs::read_to_string(dir.path().join("out/secret.rmx")).unwrap();
    let decoded = fs::read_to_string(dir.path().join("out/decoded.rmx")).unwrap();
    assert_eq!(secret, decoded);
    let rsp = fs::read_to_string(dir.path().join("out/responses.rsp")).unwrap();
    assert!(rsp.starts_with("RSP1 d=3 j=2"));
}

#[test]
fn config_errors_are_listed_together() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["plan", "--set", "k2=5", "--set", "bogus=1", "--set", "trials=x"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bogus"), "{err}");
    assert!(err.contains("trials"), "{err}");
    assert!(err.lines().filter(|l| l.trim_start().starts_with("- ")).count() >= 2, "{err}");
}

#[test]
fn decode_failure_exits_one_and_io_error_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["encode"]).status.code(), Some(0));
    let tower = FieldTower::new(2, 1, 4, None).unwrap();
    let a = matrix::identity(tower.base(), 4).select_rows(&[0, 1, 2]);
    let codeword = rmx::read_ext_matrix_in(&tower, &fs::read_to_string(dir.path().join("out/codeword.rmx")).unwrap())
        .unwrap();
    let mut received = rankstair_core::phi::matmul_mixed(&tower, &codeword, &a).unwrap();
    let bumped = tower.add(received.get(0, 0), &tower.one());
    received.set(0, 0, bumped);
    fs::write(dir.path().join("y.rmx"), rmx::write_ext_matrix(&tower, &received)).unwrap();
    fs::write(dir.path().join("a.rmx"), rmx::write_base_matrix(tower.base(), &a).unwrap()).unwrap();
    let y = dir.path().join("y.rmx");
    let a = dir.path().join("a.rmx");
    let out = run(dir.path(), &["decode", "--received", y.to_str().unwrap(), "--transfer", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
    let out = run(dir.path(), &["decode", "--received", "missing.rmx", "--transfer", "missing.rmx"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let reports: Vec<String> = [1, 3]
        .iter()
        .map(|threads| {
            let c = ExperimentConfig::from_text(TINY, &[format!("threads={threads}")]).unwrap();
            let mut report = cmd_simulate(&Setup::build(c).unwrap()).unwrap();
            report.config.threads = 0;
            format!("{}{:?}", report.canonical_json(), report.trace)
        })
        .collect();
    assert_eq!(reports[0], reports[1]);
}
