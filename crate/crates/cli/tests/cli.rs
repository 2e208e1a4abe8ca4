use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn hyperclus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperclus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn datasets() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../datasets")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Converts a shipped dataset into `dir`, returning the .edvw and labels paths.
fn convert(dir: &Path, name: &str, mode: &str) -> (PathBuf, PathBuf) {
    let data = datasets();
    let edvw = dir.join(format!("{name}.edvw"));
    let labels = dir.join(format!("{name}.labels"));
    let o = hyperclus(&[
        "convert",
        s(&data.join(format!("{name}.csv"))),
        s(&data.join(format!("schemas/{name}.schema"))),
        s(&edvw),
        "--edvw",
        mode,
        "--truth-out",
        s(&labels),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    (edvw, labels)
}

fn report_value(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}\t")))
        .unwrap_or_else(|| panic!("no {key} in report"))
        .to_string()
}

const DISCONNECTED: &str = "4 2\n1 0:1 1:1\n1 2:1 3:1\n";

#[test]
fn convert_zoo_keeps_singleton_edges() {
    let dir = TempDir::new().unwrap();
    let (edvw, labels) = convert(dir.path(), "zoo", "labels");
    let text = fs::read_to_string(edvw).unwrap();
    assert_eq!(text.lines().next(), Some("101 36"));
    assert_eq!(fs::read_to_string(labels).unwrap().lines().count(), 101);
}

#[test]
fn unit_mode_writes_all_one_weights() {
    let dir = TempDir::new().unwrap();
    let (edvw, _) = convert(dir.path(), "car", "unit");
    let text = fs::read_to_string(edvw).unwrap();
    assert_eq!(text.lines().next(), Some("134 16"));
    for line in text.lines().skip(1) {
        assert!(line.split_whitespace().skip(1).all(|m| m.ends_with(":1")), "{line}");
    }
}

#[test]
fn missing_schema_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.schema");
    let o = hyperclus(&[
        "convert",
        s(&datasets().join("car.csv")),
        s(&missing),
        s(&dir.path().join("out.edvw")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nope.schema"), "{}", stderr(&o));
}

fn cluster_car(dir: &Path, tag: &str) -> (String, String) {
    let (edvw, labels) = convert(dir, "car", "labels");
    let out = dir.join(format!("{tag}.out"));
    let report = dir.join(format!("{tag}.report"));
    let o = hyperclus(&[
        "cluster",
        s(&edvw),
        "--out",
        s(&out),
        "--report",
        s(&report),
        "--truth",
        s(&labels),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    (fs::read_to_string(out).unwrap(), fs::read_to_string(report).unwrap())
}

#[test]
fn cluster_car_report() {
    let dir = TempDir::new().unwrap();
    let (labels, report) = cluster_car(dir.path(), "a");
    assert_eq!(labels.lines().count(), 134);
    assert_eq!(report_value(&report, "dataset"), "car");
    assert_eq!(report_value(&report, "method"), "hyperclus-g");
    let ncut: f64 = report_value(&report, "ncut").parse().unwrap();
    let lambda2: f64 = report_value(&report, "lambda2").parse().unwrap();
    assert!((ncut - 0.8320).abs() < 0.005, "{ncut}");
    assert!((lambda2 - 0.7655).abs() < 0.002, "{lambda2}");
    assert_eq!(report_value(&report, "seconds"), "NA");
}

#[test]
fn cluster_output_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let first = cluster_car(dir.path(), "a");
    let second = cluster_car(dir.path(), "b");
    assert_eq!(first, second);
}

#[test]
fn disconnected_input_exits_3() {
    let dir = TempDir::new().unwrap();
    let edvw = dir.path().join("split.edvw");
    fs::write(&edvw, DISCONNECTED).unwrap();
    let o = hyperclus(&[
        "cluster",
        s(&edvw),
        "--out",
        s(&dir.path().join("l")),
        "--report",
        s(&dir.path().join("r")),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn verify_two_vertex_instances() {
    let o = hyperclus(&["verify", "--n-max", "2", "--trials", "5"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 8, "{out}");
    assert!(!out.contains("FAIL"), "{out}");
}

#[test]
fn injected_fault_fails_the_named_property() {
    let o = hyperclus(&["verify", "--n-max", "6", "--trials", "3", "--inject-fault", "cheeger"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let failing: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failing.len(), 1, "{out}");
    assert!(failing[0].contains("cheeger"), "{out}");
}

#[test]
fn bench_on_empty_directory_prints_header() {
    let dir = TempDir::new().unwrap();
    let o = hyperclus(&["bench", s(dir.path())]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);
    assert!(stdout(&o).starts_with("dataset\tmethod"));
}

#[test]
fn bench_marks_failed_rows() {
    let dir = TempDir::new().unwrap();
    convert(dir.path(), "car", "labels");
    fs::write(dir.path().join("split.edvw"), DISCONNECTED).unwrap();
    let o = hyperclus(&["bench", s(dir.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 6, "{out}");
    assert!(rows.iter().filter(|r| r.starts_with("car\t")).all(|r| !r.contains("FAILED")));
    assert!(rows.iter().filter(|r| r.starts_with("split\t")).all(|r| r.contains("FAILED")));
}
