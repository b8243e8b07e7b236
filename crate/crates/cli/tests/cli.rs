use std::path::PathBuf;
use std::process::{Command, Output};

fn divgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("divgraph-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

#[test]
fn lists_bundled_configs() {
    let o = divgraph(&["list"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 8);
}

#[test]
fn graph_prints_dot() {
    let o = divgraph(&["graph", "--config", "dvr", "--dot"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches(" -> ").count(), 9);
}

#[test]
fn classify_prints_json() {
    let o = divgraph(&["classify", "--config", "numerical-2-3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdicts"]["hfd"]["status"], "fails");
    assert_eq!(v["verdicts"]["hfd"]["witness"]["element"], "6");
    assert_eq!(v["verdicts"]["atomic"]["status"], "holds");
}

#[test]
fn assert_mode_sets_exit_status() {
    assert_eq!(divgraph(&["atomicity", "--config", "d1", "--assert"]).status.code(), Some(1));
    assert_eq!(divgraph(&["atomicity", "--config", "d1"]).status.code(), Some(0));
    assert_eq!(divgraph(&["classify", "--config", "dvr", "--assert"]).status.code(), Some(0));
}

#[test]
fn check_reports_agreement() {
    let o = divgraph(&["check", "--config", "numerical-3-5-7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 disagreements"));
}

#[test]
fn run_writes_artifacts() {
    let dir = scratch("run");
    let o = divgraph(&["run", "--config", "zxq-chain", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names, ["atomicity.json", "classify.json", "components.json", "graph.dot", "graph.json"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn errors_leave_no_artifacts() {
    let dir = scratch("bad");
    std::fs::create_dir_all(&dir).unwrap();
    let conf = dir.join("bad.conf");
    std::fs::write(&conf, "kind = dvr\nwindow.max_exponent = 3\nwindow.colour = blue\n").unwrap();
    let out = dir.join("out");
    let o = divgraph(&["run", "--config", conf.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("window.colour"));
    assert!(!out.exists());

    std::fs::write(&conf, "kind = zxq\nwindow.max_ord = 1\nwindow.max_degree = 1\nwindow.max_numerator = 2\nwindow.max_denominator = 1\nwindow.fractional = true\n").unwrap();
    let o = divgraph(&["graph", "--config", conf.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!out.exists());

    assert_eq!(divgraph(&["graph", "--config", "no-such-config"]).status.code(), Some(3));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bound_flag_caps_paths() {
    let o = divgraph(&["classify", "--config", "dvr", "--bound", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdicts"]["accp"]["status"], "inconclusive");
}
