use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigmalab")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn temp_file(tag: &str) -> PathBuf {
    static NEXT: AtomicUsize = AtomicUsize::new(0);
    let k = NEXT.fetch_add(1, Ordering::Relaxed);
    std::env::temp_dir().join(format!("sigmalab-{}-{tag}-{k}", std::process::id()))
}

fn gen_table(args: &[&str]) -> PathBuf {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let path = temp_file("table.json");
    std::fs::write(&path, &out.stdout).unwrap();
    path
}

#[test]
fn count_top_five() {
    let r = report(&["count-top", "--n", "5"]);
    assert_eq!(r["result"], 6942);
    assert_eq!(r["pass"], true);
}

#[test]
fn theorem_b_on_f3_squared() {
    let r = report(&["theorem-b", "--field", "3,1", "--dim", "2"]);
    assert_eq!(r["pass"], true);
    assert_eq!(r["result"]["census"], 432);
    assert_eq!(r["result"]["expected"], 432);
}

#[test]
fn galois_verify_passes() {
    let r = report(&["galois-verify", "--field", "2,1", "--dim", "2"]);
    assert_eq!(r["pass"], true);
}

#[test]
fn theorem_a_round_trips() {
    let r = report(&["theorem-a-e2e", "--seed", "7", "--trials", "20"]);
    assert_eq!(r["pass"], true);
    assert_eq!(r["counters"]["recovered"], 20);
}

#[test]
fn hartmanis_recovers_generated_table() {
    let table = gen_table(&["gen-table", "sigma", "--theta", "2,0,3,1", "--complement"]);
    let r = report(&["hartmanis", "--table", table.to_str().unwrap()]);
    assert_eq!(r["result"]["theta"], serde_json::json!([2, 0, 3, 1]));
    assert_eq!(r["result"]["uses_complement"], true);
    std::fs::remove_file(table).ok();
}

#[test]
fn ftpg_recovers_generated_table() {
    let table = gen_table(&[
        "gen-table", "subspace", "--field", "2,2", "--dim", "3", "--frobenius", "1", "--matrix", "0,1,0;1,0,0;1,0,1",
    ]);
    let r = report(&["ftpg", "--table", table.to_str().unwrap()]);
    assert_eq!(r["pass"], true);
    assert_eq!(r["result"]["induces_table"], true);
    std::fs::remove_file(table).ok();
}

#[test]
fn theorem_c_recovers_frobenius() {
    let table = gen_table(&["gen-table", "tau", "--field", "2,2", "--dim", "3", "--frobenius", "1"]);
    let r = report(&["theorem-c", "--table", table.to_str().unwrap()]);
    assert_eq!(r["pass"], true);
    assert_eq!(r["result"]["psi"]["frobenius_exponent"], 1);
    std::fs::remove_file(table).ok();
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["theorem-c", "--table", "/nonexistent/table.json"]).status.code(), Some(2));
    assert_eq!(run(&["count-top", "--n", "9"]).status.code(), Some(2));
    assert_eq!(run(&["theorem-b", "--field", "4,1", "--dim", "2"]).status.code(), Some(2));
    assert_eq!(run(&["theorem-b", "--field", "5,1", "--dim", "1"]).status.code(), Some(2));
    let table = gen_table(&["gen-table", "subspace", "--field", "2,1", "--dim", "2"]);
    assert_eq!(run(&["ftpg", "--table", table.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_file(table).ok();
}

#[test]
fn output_is_identical_across_runs() {
    let args = ["theorem-b", "--field", "2,2", "--dim", "2", "--seed", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn enum_top_then_export_dot() {
    let lines = temp_file("top.jsonl");
    let r = report(&["enum-top", "--n", "3", "--out", lines.to_str().unwrap()]);
    assert_eq!(r["counters"]["topologies"], 29);
    assert_eq!(std::fs::read_to_string(&lines).unwrap().lines().count(), 29);
    let streamed = run(&["enum-top", "--n", "3", "--out", "-"]);
    assert_eq!(streamed.stdout, std::fs::read(&lines).unwrap());
    let out = run(&["export-dot", "--input", lines.to_str().unwrap()]);
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph sigma {"));
    assert_eq!(dot.matches("[label=").count(), 29);
    std::fs::remove_file(lines).ok();
}
