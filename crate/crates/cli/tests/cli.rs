use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn phasewalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phasewalk")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn final_success(out: &Output) -> f64 {
    stdout(out)
        .lines()
        .find_map(|l| l.strip_prefix("final_success "))
        .expect("final_success line")
        .parse()
        .unwrap()
}

#[test]
fn analyze_reports_ladders() {
    let out = phasewalk(&["analyze", "johnson2", "258"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("d=1") && text.contains("t=pi/2 "), "{text}");

    let text = stdout(&phasewalk(&["analyze", "--family", "rook", "8", "512"]));
    assert!(text.contains("d=2") && text.contains("t=pi/8 ") && text.contains("t=pi/512 "), "{text}");

    let text = stdout(&phasewalk(&["analyze", "complete", "16"]));
    assert!(text.contains("d=1") && text.contains("t=pi/16 "), "{text}");
}

#[test]
fn analyze_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("analysis.json");
    let out = phasewalk(&["analyze", "rook", "3", "27", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["depth"], 2);
    assert_eq!(v["n_vertices"], 81);
    assert_eq!(v["levels"][0]["flip"], serde_json::json!([3, 27]));
}

#[test]
fn nonperiodic_edge_list_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p4.txt");
    fs::write(&path, "0 1\n1 2\n2 3\n").unwrap();
    let out = phasewalk(&["analyze", "--edges", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not periodic"));
}

#[test]
fn periodic_edge_list_runs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c4.txt");
    fs::write(&path, "# 4-cycle\n0 1\n1 2\n2 3\n3 0\n").unwrap();
    let out = phasewalk(&["run", "--edges", path.to_str().unwrap(), "--marked", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dense = phasewalk(&["run", "--edges", path.to_str().unwrap(), "--marked", "2", "--dense"]);
    assert!((final_success(&out) - final_success(&dense)).abs() < 1e-10);
}

#[test]
fn usage_errors_exit_with_code_1() {
    let out = phasewalk(&["analyze", "--family", "complete", "4", "--edges", "x.txt"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(phasewalk(&["analyze", "torus", "3"]).status.code(), Some(1));
    assert_eq!(phasewalk(&["analyze", "rook", "3"]).status.code(), Some(1));
    assert_eq!(phasewalk(&["run", "complete", "4", "--stride", "0"]).status.code(), Some(1));
    assert_eq!(phasewalk(&["analyze", "complete", "4", "--marked", "4"]).status.code(), Some(1));
}

#[test]
fn schedule_examples() {
    let v: Value = serde_json::from_str(&stdout(&phasewalk(&["schedule", "complete", "1024"]))).unwrap();
    assert_eq!(v["n_queries"], 25);
    assert!(v["predicted_success"].as_f64().unwrap() >= 0.999);

    let v: Value = serde_json::from_str(&stdout(&phasewalk(&["schedule", "completesquare", "16"]))).unwrap();
    let p: Vec<f64> = v["levels"].as_array().unwrap().iter().map(|l| l["p"].as_f64().unwrap()).collect();
    assert_eq!(p.len(), 3);
    assert!((p[0] - 2.0).abs() < 1e-12 && (p[1] - 2.0).abs() < 1e-12);
    assert!((p[2] - 6.2).abs() < 0.1);
    assert!(v["finisher"].is_array());

    let v: Value = serde_json::from_str(&stdout(&phasewalk(&["schedule", "johnson2", "257"]))).unwrap();
    assert_eq!(v["exact_u1"]["mode"], "three_phase");

    let v: Value = serde_json::from_str(&stdout(&phasewalk(&["schedule", "johnson2", "256", "--exact-u1", "off"]))).unwrap();
    assert!(v["exact_u1"].is_null());
}

#[test]
fn run_writes_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("j258.csv");
    let out = phasewalk(&["run", "johnson2", "258", "--out", csv.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(final_success(&out) >= 1.0 - 1.0 / 33153.0);
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("query,prob_marked,prob_s,amp_re_0,amp_im_0,"));
    assert_eq!(text.lines().count(), 1 + 1 + 143);

    let json = dir.path().join("rook.json");
    let out = phasewalk(&["run", "rook", "8", "512", "--stride", "10", "--out", json.to_str().unwrap()]);
    assert!(final_success(&out) >= 0.5);
    let v: Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    let samples = v["samples"].as_array().unwrap();
    assert_eq!(samples[1]["query_index"], 10);
    assert_eq!(samples.last().unwrap()["prob_marked"], v["final_success"]);
}

#[test]
fn dense_request_over_cap_is_refused() {
    let out = phasewalk(&["run", "rook", "8", "512", "--dense", "--cap", "64"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap is 64"));
}

#[test]
fn dense_and_reduced_runs_agree() {
    let reduced = phasewalk(&["run", "completesquare", "8"]);
    let dense = phasewalk(&["run", "completesquare", "8", "--dense"]);
    assert!((final_success(&reduced) - final_success(&dense)).abs() < 1e-8);
}

#[test]
fn saved_schedule_reproduces_trajectory_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let sched = dir.path().join("s.json");
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert!(phasewalk(&["schedule", "johnson2", "256", "--out", sched.to_str().unwrap()]).status.success());
    assert!(phasewalk(&["run", "johnson2", "256", "--out", a.to_str().unwrap()]).status.success());
    let out = phasewalk(&["run", "johnson2", "256", "--schedule", sched.to_str().unwrap(), "--out", b.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn schedule_for_other_graph_is_a_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let sched = dir.path().join("s.json");
    assert!(phasewalk(&["schedule", "complete", "16", "--out", sched.to_str().unwrap()]).status.success());
    let out = phasewalk(&["run", "complete", "32", "--schedule", sched.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mismatch"));
}

#[test]
fn sweep_table() {
    let out = phasewalk(&["sweep-d2", "--n", "256", "--grid", "10"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "overlap_chi1,depth,p1,p2,n_iter,n_queries,success");
    assert_eq!(lines.len(), 11);
    assert!(lines[1].starts_with("0,1,"));
}

#[test]
fn verify_exit_codes() {
    let out = phasewalk(&["verify", "--only", "1,9", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 2);

    let out = phasewalk(&["verify", "--only", "6", "--outer-rounding", "half-up"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("criterion 6 [FAIL]"));
}
