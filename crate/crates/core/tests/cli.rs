use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/specs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bennett8")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["validate", path(&spec("spherical8.toml"))]).status.code(), Some(0));
    let bad = run(&["validate", path(&spec("invalid_range.toml"))]);
    assert_eq!(bad.status.code(), Some(1));
    let diag: serde_json::Value = serde_json::from_slice(&bad.stderr).unwrap();
    assert_eq!(diag["error"], "invalid-spec");
    assert!(diag["message"].as_str().unwrap().contains("u3 - u1"));

    let missing = run(&["validate", "/nonexistent/spec.toml"]);
    assert_eq!(missing.status.code(), Some(1));
    let diag: serde_json::Value = serde_json::from_slice(&missing.stderr).unwrap();
    assert_eq!(diag["error"], "io");
}

#[test]
fn every_example_verifies() {
    for name in ["spherical8.toml", "spatial8.toml", "mixed_branches.toml", "isogram.toml", "bennett.toml"] {
        let o = run(&["verify", path(&spec(name)), "--phi-grid", "9"]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(stdout(&o).contains("verified"));
    }
}

#[test]
fn impossible_tolerance_fails_verification() {
    let o = run(&["verify", path(&spec("spatial8.toml")), "--phi-grid", "5", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(2));
    let diag: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(diag["error"], "verification-failed");
}

#[test]
fn derive_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["spherical8.toml", "spatial8.toml"] {
        let first = run(&["derive", path(&spec(name))]);
        assert_eq!(first.status.code(), Some(0));
        let text = stdout(&first);
        assert!(text.contains("beta3") && !text.contains("derive = true"), "{text}");
        let file = dir.path().join(name);
        std::fs::write(&file, &text).unwrap();
        let second = run(&["derive", path(&file)]);
        assert_eq!(stdout(&second), text);
    }
}

#[test]
fn pose_at_zero_is_aligned() {
    let o = run(&["pose", path(&spec("spherical8.toml")), "--phi", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let scene: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(scene["collapsed"], true);
    assert_eq!(scene["bars"].as_array().unwrap().len(), 8);
    assert_eq!(scene["joints"].as_array().unwrap().len(), 12);
    assert!(scene["symmetry"].as_array().unwrap().is_empty());
    // every bar normal is the base normal up to sign
    for bar in scene["bars"].as_array().unwrap() {
        let n: Vec<f64> = bar["normal"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        assert!(n[0].abs() < 1e-10 && n[1].abs() < 1e-10 && (n[2].abs() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn pose_writes_obj() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("pose.obj");
    let o = run(&["pose", path(&spec("spatial8.toml")), "--phi", "-0.8", "--obj", path(&obj), "--segments", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let scene: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(scene["collapsed"], false);
    let labels: Vec<&str> = scene["symmetry"].as_array().unwrap().iter().map(|e| e["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["s1", "s2", "s3", "s4", "s5", "s6", "n", "t"]);
    let text = std::fs::read_to_string(&obj).unwrap();
    let objects = text.lines().filter(|l| l.starts_with("o ")).count();
    assert_eq!(objects, 8 + 12 + 8);
    // every line element is one segment, so two vertices each
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 2 * objects);
}

#[test]
fn sweep_rows_and_columns() {
    let o = run(&["sweep", path(&spec("spherical8.toml")), "--samples", "7", "--from", "-1", "--to", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let mut rd = csv::Reader::from_reader(o.stdout.as_slice());
    let header = rd.headers().unwrap().clone();
    assert_eq!(&header[0], "phi1");
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[0][0].parse::<f64>().unwrap(), -1.0);
    assert_eq!(rows[3][1].to_string(), "collapsed");
    assert!(rows.iter().all(|r| r.len() == header.len()));
    assert!(rows.iter().enumerate().all(|(k, r)| k == 3 || &r[1] == "ok"));
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(run(&["sweep", path(&spec("spherical8.toml")), "--samples", "1"]).status.code(), Some(1));
    assert_eq!(run(&["pose", path(&spec("spherical8.toml")), "--phi", "nan"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}
