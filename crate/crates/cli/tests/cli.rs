use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spid-lab"))
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

/// The JSON block that ends a report.
fn trailing_json(o: &Output) -> Value {
    let text = stdout(o);
    let start = text.find("\n{").expect("json block") + 1;
    serde_json::from_str(&text[start..]).expect("valid json")
}

fn build(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["construct"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", path.to_str().unwrap()]);
    let o = run(&all);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    path
}

#[test]
fn construct_class_ii_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = build(dir.path(), "fam.json", &["--class", "II", "--q", "2", "--k", "3", "--t", "2", "--n", "4"]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["ambient"], 7);
    assert_eq!(v["subspaces"].as_array().unwrap().len(), 4);
    assert_eq!(v["metadata"]["construction"], "II");
}

#[test]
fn construct_names_violated_constraint() {
    let o = run(&["construct", "--class", "III", "--q", "2", "--k", "4", "--t", "2", "--n", "6", "--s", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("q+1 >= s"), "{}", stderr(&o));

    let o = run(&["construct", "--class", "I", "--q", "2", "--k", "4", "--t", "2", "--n", "5", "--m", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("2 < m"), "{}", stderr(&o));
}

#[test]
fn missing_parameter_is_input_error() {
    let o = run(&["construct", "--class", "I", "--q", "2", "--k", "4", "--t", "2", "--n", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--m"));
}

#[test]
fn verify_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let path = build(dir.path(), "c1.json", &["--class", "I", "--q", "2", "--k", "4", "--t", "2", "--n", "5", "--m", "3"]);
    let p = path.to_str().unwrap();
    let o = run(&["verify", p, "-L", "2,3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));

    let o = run(&["verify", p, "-L", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("meets in dimension 3"), "{}", stdout(&o));
}

#[test]
fn truncated_file_exits_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"q\": 2,\n  \"ambient\": 7,\n  \"k\"").unwrap();
    let o = run(&["verify", path.to_str().unwrap(), "-L", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn duplicate_members_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dup.json");
    std::fs::write(&path, r#"{"q":2,"ambient":3,"k":1,"subspaces":[[[1,0,0]],[[1,0,0]]]}"#).unwrap();
    let o = run(&["delta", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn delta_of_shuffled_class_iv() {
    let dir = tempfile::tempdir().unwrap();
    let path = build(dir.path(), "c4.json", &["--class", "IV", "--q", "3", "--k", "5", "--t", "3", "--n", "6", "--s", "3"]);
    for seed in ["1", "2", "99"] {
        let o = run(&["delta", path.to_str().unwrap(), "--seed", seed]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("delta: (5,3,2,2,2,2)"), "{}", stdout(&o));
        assert_eq!(trailing_json(&o)["delta"], serde_json::json!([5, 3, 2, 2, 2, 2]));
    }
}

#[test]
fn classify_each_class() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str]); 4] = [
        ("ClassI", &["--class", "I", "--q", "2", "--k", "5", "--t", "3", "--n", "6", "--m", "4"]),
        ("ClassII", &["--class", "II", "--q", "2", "--k", "4", "--t", "3", "--n", "5"]),
        ("ClassIII", &["--class", "III", "--q", "3", "--k", "4", "--t", "2", "--n", "6", "--s", "3"]),
        ("ClassIV", &["--class", "IV", "--q", "2", "--k", "4", "--t", "2", "--n", "5", "--s", "2"]),
    ];
    for (i, (want, args)) in cases.iter().enumerate() {
        let path = build(dir.path(), &format!("f{i}.json"), args);
        let o = run(&["classify", path.to_str().unwrap(), "--seed", "5"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert_eq!(trailing_json(&o)["verdict"], *want, "{}", stdout(&o));
    }
}

#[test]
fn classify_rejects_non_extremal() {
    let dir = tempfile::tempdir().unwrap();
    let path = build(dir.path(), "r.json", &["--class", "remark", "--q", "2", "--k", "6", "--t1", "4", "--t2", "2", "--n", "6", "--m", "3", "--s", "5"]);
    let o = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bound_on_two_value_example() {
    let dir = tempfile::tempdir().unwrap();
    let path = build(dir.path(), "r.json", &["--class", "remark", "--q", "2", "--k", "6", "--t1", "4", "--t2", "2", "--n", "6", "--m", "3", "--s", "5"]);
    let o = run(&["bound", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = trailing_json(&o);
    assert_eq!(v["refined_threshold"], 21);
    assert!(v["dim_span"].as_u64().unwrap() <= 21);
    assert_eq!(v["implication_holds"], true);
}

#[test]
fn sweep_builtin_and_empty() {
    let o = run(&["sweep"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains(" 0 failed"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.json");
    std::fs::write(&cfg, "{}").unwrap();
    let out = dir.path().join("rows.json");
    let o = run(&["sweep", cfg.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 rows, 0 failed"));
    let rows: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 0);
}

#[test]
fn sweep_with_oracle_small_range() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.json");
    std::fs::write(&cfg, r#"{"q":[2,3],"k":[3,4],"n":[4,5,6,7],"oracle":true}"#).unwrap();
    let out = dir.path().join("rows.json");
    let o = run(&["sweep", cfg.to_str().unwrap(), "--seed", "11", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let rows: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows = rows.as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["oracle_ok"] == true));
}

#[test]
fn invalid_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"q":[2],"colour":"red"}"#).unwrap();
    let o = run(&["sweep", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
