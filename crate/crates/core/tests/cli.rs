mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nelson::duality::NelsonSpace;
use nelson::product;
use tempfile::TempDir;

use common::chain;

fn nelson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nelson"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn chain_file(dir: &Path, n: usize) -> PathBuf {
    write(dir, &format!("c{n}.json"), &chain(n).tables().to_json())
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn count_prints_the_number() {
    let o = nelson(&["count", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "48");
    let o = nelson(&["count", "--n", "2"]);
    assert_eq!(stdout(&o).trim(), "122880000");
}

#[test]
fn identity_failure_reports_a_counterexample() {
    let dir = TempDir::new().unwrap();
    let c6 = chain_file(dir.path(), 6);
    let nt3 = "((x -> y) -> z) /\\ ((~z -> ~y) -> ~x) = ((x -> y) -> z) /\\ ((~z -> ~y) -> ~x)";
    let o = nelson(&["check-identity", arg(&c6), "--eq", nt3]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = nelson(&["classify", arg(&c6)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("five-valued=false"), "{}", stdout(&o));
}

#[test]
fn nt3_on_c6_exits_with_check_failure() {
    let dir = TempDir::new().unwrap();
    let c6 = chain_file(dir.path(), 6);
    let o = nelson(&["check-identity", arg(&c6), "--eq", "((x -> z) -> y) -> (((y -> x) -> y) -> y) = 1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).contains("x=3 y=4 z=0"), "{}", stdout(&o));
}

#[test]
fn classify_c5() {
    let dir = TempDir::new().unwrap();
    let c5 = chain_file(dir.path(), 5);
    let o = nelson(&["classify", arg(&c5)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("five-valued=true linear=true"), "{}", stdout(&o));
}

#[test]
fn malformed_json_is_a_usage_error_naming_the_field() {
    let dir = TempDir::new().unwrap();
    let mut file = chain(3).tables().to_file();
    file.neg[1] = 7;
    let bad = write(dir.path(), "bad.json", &serde_json::to_string(&file).unwrap());
    let o = nelson(&["classify", arg(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("neg"), "{}", stderr(&o));
    let garbage = write(dir.path(), "garbage.json", "{ not json");
    assert_eq!(nelson(&["classify", arg(&garbage)]).status.code(), Some(2));
}

#[test]
fn syntax_error_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let c3 = chain_file(dir.path(), 3);
    let o = nelson(&["check-identity", arg(&c3), "--eq", "x -> = y"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_nelson_tables_fail_the_checks() {
    let dir = TempDir::new().unwrap();
    let transposed = write(dir.path(), "t.json", &chain(5).with_transposed_imp().to_json());
    let o = nelson(&["check-axioms", arg(&transposed)]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let o = nelson(&["classify", arg(&transposed)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn quotient_by_a_non_deductive_system_fails() {
    let dir = TempDir::new().unwrap();
    let c5 = chain_file(dir.path(), 5);
    let o = nelson(&["quotient", arg(&c5), "--ds", "3,4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = nelson(&["quotient", arg(&c5), "--ds", "1,4"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn invalid_space_names_the_axiom() {
    let dir = TempDir::new().unwrap();
    let good = NelsonSpace::new(|x, y| x <= y, vec![1, 0]).unwrap();
    let good_path = write(dir.path(), "good.json", &good.to_json());
    let o = nelson(&["dual", arg(&good_path)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut file = good.to_file();
    file.phi = vec![0, 0];
    let bad = write(dir.path(), "bad.json", &serde_json::to_string(&file).unwrap());
    let o = nelson(&["dual", arg(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("involution"), "{}", stderr(&o));
}

#[test]
fn json_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let square = product(&[&chain(2), &chain(3)]).unwrap();
    let path = write(dir.path(), "p.json", &square.tables().to_json());
    for cmd in ["classify", "spectrum", "roundtrip"] {
        let a = nelson(&["--json", cmd, arg(&path)]);
        let b = nelson(&["--json", cmd, arg(&path)]);
        assert_eq!(a.status.code(), Some(0), "{cmd}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        serde_json::from_slice::<serde_json::Value>(&a.stdout).unwrap();
    }
}

#[test]
fn free_one_materialized() {
    let o = nelson(&["--json", "free", "--n", "1", "--materialize"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["total_count"].as_str().map(str::to_owned).unwrap_or_else(|| v["total_count"].to_string()), "48");
}

#[test]
fn roundtrip_and_spectrum_of_c5() {
    let dir = TempDir::new().unwrap();
    let c5 = chain_file(dir.path(), 5);
    assert_eq!(nelson(&["roundtrip", arg(&c5)]).status.code(), Some(0));
    let o = nelson(&["--json", "spectrum", arg(&c5)]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["points"].as_array().map(Vec::len), Some(4), "{v}");
}
