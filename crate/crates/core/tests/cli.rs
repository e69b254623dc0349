use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn write(dir: &TempDir, name: &str, doc: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, doc.to_string()).unwrap();
    path
}

fn run(args: &[&str], input: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bbranching"))
        .args(args)
        .arg("--input")
        .arg(input)
        .output()
        .unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn two_cycle() -> Value {
    json!({"n": 2, "arcs": [[0, 1], [1, 0]], "b": [1, 1], "w": [3, 2]})
}

#[test]
fn max_weight_certificate_round_trip() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "i.json", &two_cycle());
    let out = run(&["max-weight"], &input);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["weight"], "3");
    assert_eq!(v["arcs"], json!([0]));
    assert_eq!(v["certificate"]["objective"], "3");

    let cert = dir.path().join("cert.json");
    std::fs::write(&cert, &out.stdout).unwrap();
    let out = run(&["verify", "--certificate", cert.to_str().unwrap()], &input);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["valid"], true);
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "i.json", &two_cycle());
    let mut v = stdout_json(&run(&["max-weight"], &input));
    v["certificate"]["p_sets"] = json!([]);
    let cert = write(&dir, "cert.json", &v);
    let out = run(&["verify", "--certificate", cert.to_str().unwrap()], &input);
    assert_eq!(out.status.code(), Some(2));
    let r = stdout_json(&out);
    assert_eq!(r["valid"], false);
    assert!(r["violation"]["code"].is_string());
}

#[test]
fn output_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let doc = json!({
        "n": 4,
        "arcs": [[0, 1], [1, 2], [2, 0], [3, 0], [1, 3], [2, 3], [3, 3]],
        "b": [2, 1, 2, 2],
        "w": [5, "7/2", 4, 1, 6, 2, 3]
    });
    let input = write(&dir, "i.json", &doc);
    let first = run(&["max-weight", "--oracle"], &input);
    assert_eq!(first.status.code(), Some(0));
    for _ in 0..3 {
        assert_eq!(run(&["max-weight", "--oracle"], &input).stdout, first.stdout);
    }
}

#[test]
fn infeasible_pack_exits_two_with_witness() {
    let dir = TempDir::new().unwrap();
    let doc = json!({"n": 3, "arcs": [[0, 1]], "b": [1, 1, 1], "b_i": [[0, 1, 1]]});
    let input = write(&dir, "i.json", &doc);
    let out = run(&["pack", "--oracle"], &input);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert!(v["violated"].is_object(), "{v}");
    assert!(!out.stderr.is_empty());
    let quiet = run(&["pack", "--quiet"], &input);
    assert_eq!(quiet.status.code(), Some(2));
    assert!(quiet.stderr.is_empty());
}

#[test]
fn pack_and_feasible_indegree() {
    let dir = TempDir::new().unwrap();
    let doc = json!({
        "n": 3,
        "arcs": [[0, 1], [0, 2], [1, 2], [0, 1]],
        "b": [1, 1, 1],
        "b_i": [[0, 1, 1], [0, 1, 0]],
        "b_prime": [0, 1, 1]
    });
    let input = write(&dir, "i.json", &doc);
    let out = run(&["pack", "--oracle"], &input);
    assert_eq!(out.status.code(), Some(0));
    let parts = stdout_json(&out)["parts"].as_array().unwrap().clone();
    assert_eq!(parts.len(), 2);
    assert_eq!(parts[1].as_array().unwrap().len(), 1);

    let out = run(&["feasible-indegree"], &input);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["feasible"], true);
    assert_eq!(v["arcs"].as_array().unwrap().len(), 2);
}

#[test]
fn pack_min_weight_agrees_with_oracle() {
    let dir = TempDir::new().unwrap();
    let doc = json!({
        "n": 3,
        "arcs": [[0, 1], [0, 1], [1, 2], [0, 2]],
        "b": [1, 1, 1],
        "w": [4, 1, 2, 5],
        "b_i": [[0, 1, 1]]
    });
    let input = write(&dir, "i.json", &doc);
    let out = run(&["pack-min-weight", "--oracle"], &input);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["weight"], "3");
    assert_eq!(v["oracle"]["agrees"], true);
}

#[test]
fn cover_and_decompose() {
    let dir = TempDir::new().unwrap();
    let doc = json!({"n": 2, "arcs": [[0, 1], [1, 0]], "b": [1, 1], "k": 2, "x": [2, 0]});
    let input = write(&dir, "i.json", &doc);
    let out = run(&["cover"], &input);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["parts"].as_array().unwrap().len(), 2);
    let out = run(&["decompose"], &input);
    assert_eq!(out.status.code(), Some(0));
    let parts = stdout_json(&out)["parts"].clone();
    let mut flat: Vec<u64> = parts.as_array().unwrap().iter().flat_map(|p| p.as_array().unwrap().iter().map(|a| a.as_u64().unwrap())).collect();
    flat.sort_unstable();
    assert_eq!(flat, vec![0, 0]);

    let zero = json!({"n": 3, "arcs": [[0, 1], [1, 2], [2, 0]], "b": [1, 1, 1], "k": 3, "x": [0, 0, 0]});
    let input = write(&dir, "z.json", &zero);
    let out = run(&["decompose"], &input);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["parts"], json!([[], [], []]));

    let too_much = json!({"n": 2, "arcs": [[0, 1], [1, 0]], "b": [1, 1], "k": 1});
    let input = write(&dir, "t.json", &too_much);
    let out = run(&["cover"], &input);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["violated"], json!({"X": [0, 1]}));
}

#[test]
fn mr_max_weight_with_partition_matroid() {
    let dir = TempDir::new().unwrap();
    let doc = json!({
        "n": 3,
        "arcs": [[0, 2], [0, 2], [1, 2], [0, 2]],
        "b": [1, 1, 2],
        "w": [9, 8, 1, 2],
        "matroids": [
            {"kind": "uniform", "rank": 1},
            {"kind": "uniform", "rank": 1},
            {"kind": "partition", "blocks": [[0, 1], [2, 3]], "caps": [1, 1]}
        ]
    });
    let input = write(&dir, "i.json", &doc);
    let out = run(&["mr-max-weight", "--oracle"], &input);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["arcs"], json!([0, 3]));
    assert_eq!(v["weight"], "11");
    assert_eq!(v["oracle"]["agrees"], true);
}

#[test]
fn malformed_input_exits_one_with_path() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (json!({"n": 2, "arcs": [[0, 1]], "b": [1]}), "$.b"),
        (json!({"n": 2, "arcs": [[0, 1]], "b": [1, 1], "w": ["x"]}), "$.w[0]"),
        (json!({"n": 2, "arcs": [[0, 9]], "b": [1, 1], "w": [1]}), "$.arcs[0][1]"),
        (json!({"n": 2, "arcs": [], "b": [1, 1]}), "$.w"),
    ];
    for (i, (doc, path)) in cases.iter().enumerate() {
        let input = write(&dir, &format!("bad{i}.json"), doc);
        let out = run(&["max-weight"], &input);
        assert_eq!(out.status.code(), Some(1));
        assert!(out.stdout.is_empty());
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(path), "{err} lacks {path}");
    }
    let out = run(&["max-weight"], &dir.path().join("missing.json"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn dot_export() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "i.json", &two_cycle());
    let dot = dir.path().join("g.dot");
    let out = run(&["max-weight", "--dot", dot.to_str().unwrap(), "--seed", "7"], &input);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(text.contains("0 -> 1"));
}
