use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;
use toric_nurbs::{eval_nurbs, CurveDocument};

const ARCH: &str = r#"{
  "degree": 2,
  "knots": [0, 0, 0, 0.25, 0.75, 1, 1, 1],
  "points": [[0, 0], [1, 3], [3, 4], [5, 2], [6, 0]],
  "weights": [3, 2, 3, 2, 5],
  "lifting": [1, 2, 3, 2, 1],
  "meta": {"name": "arch"}
}"#;

const HOOK: &str = r#"{
  "degree": 2,
  "knots": [0, 0, 0, 0.25, 1, 1, 1],
  "points": [[0, 0], [1, 2], [3, 2], [4, 0]],
  "weights": [3, 1, 2, 2],
  "lifting": [1, 3, 2, 1]
}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-nurbs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn parse_row(line: &str) -> Vec<f64> {
    line.split('\t').map(|v| v.parse().unwrap()).collect()
}

#[test]
fn eval_interpolates_ends_and_matches_the_library() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "arch.json", ARCH);
    let o = run(&["eval", &file, "--u", "0", "--u", "1", "--u", "0.5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows: Vec<Vec<f64>> = stdout(&o).lines().map(parse_row).collect();
    assert_eq!(rows[0], vec![0.0, 0.0]);
    assert_eq!(rows[1], vec![6.0, 0.0]);
    let spec = CurveDocument::parse(ARCH).unwrap().to_spec().unwrap();
    let q = eval_nurbs(&spec, 0.5).unwrap();
    assert!((rows[2][0] - q.x).abs() <= 1e-12 && (rows[2][1] - q.y).abs() <= 1e-12);
}

#[test]
fn eval_default_samples() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "arch.json", ARCH);
    let o = run(&["eval", &file, "--samples", "7", "--t", "100"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 7);
}

#[test]
fn decompose_listings() {
    let dir = TempDir::new().unwrap();
    let hook = write(&dir, "hook.json", HOOK);
    let o = run(&["decompose", &hook]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "{{0,1},{1,2}} | {{2,3,4}}");

    let bezier = write(
        &dir,
        "bezier.json",
        r#"{"degree": 4, "knots": [0,0,0,0,0,1,1,1,1,1],
            "points": [[0,0],[1,1],[2,2],[3,1],[4,0]], "weights": [1,1,1,1,1],
            "lifting": [2,3,4,2,3]}"#,
    );
    assert_eq!(
        stdout(&run(&["decompose", &bezier])).trim(),
        "{{0,1,2},{2,4}}"
    );

    let flat = write(
        &dir,
        "flat.json",
        &ARCH.replace("[1, 2, 3, 2, 1]", "[0, 0, 0, 0, 0]"),
    );
    assert_eq!(
        stdout(&run(&["decompose", &flat])).trim(),
        "{{0,1,2}} | {{2,3,4}} | {{4,5,6}}"
    );

    let json: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["decompose", &hook, "--json"]))).unwrap();
    assert_eq!(json["pieces"][1]["subsets"], serde_json::json!([[2, 3, 4]]));
}

#[test]
fn missing_lifting_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let file = write(
        &dir,
        "plain.json",
        &ARCH.replace("\"lifting\": [1, 2, 3, 2, 1],", ""),
    );
    for cmd in ["decompose", "limit", "report"] {
        let o = run(&[cmd, &file]);
        assert_eq!(o.status.code(), Some(2), "{cmd}");
        assert!(stderr(&o).contains("lifting"), "{}", stderr(&o));
    }
}

#[test]
fn malformed_documents_name_line_or_field() {
    let dir = TempDir::new().unwrap();
    let broken = write(
        &dir,
        "broken.json",
        "{\n  \"degree\": 2,\n  \"knots\": [0, 0,, 1]\n}",
    );
    let o = run(&["eval", &broken]);
    assert_eq!(o.status.code(), Some(1));
    let msg = stderr(&o);
    assert!(
        msg.contains("parse_error") && msg.contains("line 3"),
        "{msg}"
    );

    let zero = write(
        &dir,
        "zero.json",
        &ARCH.replace("[3, 2, 3, 2, 5]", "[3, 2, 0, 2, 5]"),
    );
    let msg = stderr(&run(&["eval", &zero]));
    assert!(
        msg.contains("validation_error") && msg.contains("`weights[2]`"),
        "{msg}"
    );

    let o = run(&["eval", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing.json"));
}

#[test]
fn limit_prints_piece_weights() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "arch.json", ARCH);
    let o = run(&["limit", &file]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v["pieces"][0]["weights"],
        serde_json::json!([3.0, 2.0, 1.0])
    );
    assert_eq!(v["pieces"][1]["degenerate"], serde_json::json!(true));
    assert_eq!(
        v["pieces"][2]["weights"],
        serde_json::json!([1.0, 2.0, 5.0])
    );
}

#[test]
fn report_converges_on_the_arch() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "arch.json", ARCH);
    let o = run(&["report", &file, "--t", "2", "--t", "10", "--t", "1e4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["converged"], serde_json::json!(true));
    assert_eq!(v["t_values"], serde_json::json!([2.0, 10.0, 1e4]));
}

fn frame_files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    v.sort();
    v
}

#[test]
fn frames_are_counted_and_deterministic() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "arch.json", ARCH);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let o = run(&[
            "frames",
            &file,
            "--t",
            "2",
            "--t",
            "3",
            "--t",
            "5",
            "--t",
            "10",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert_eq!(stdout(&o).lines().count(), 4);
    }
    let files = frame_files(&out_a);
    assert_eq!(
        files,
        [
            "frame_000.svg",
            "frame_001.svg",
            "frame_002.svg",
            "frame_003.svg",
            "manifest.json"
        ]
    );
    for f in &files {
        assert_eq!(
            std::fs::read(out_a.join(f)).unwrap(),
            std::fs::read(out_b.join(f)).unwrap(),
            "{f}"
        );
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_a.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["frames"][3]["t"], serde_json::json!(10.0));
    assert_eq!(manifest["curves"], serde_json::json!(["arch"]));
}

#[test]
fn scene_frames_use_the_shared_schedule() {
    let dir = TempDir::new().unwrap();
    let scene = format!(r#"{{"curves": [{ARCH}, {HOOK}], "t_schedule": [1, 10, 100]}}"#);
    let file = write(&dir, "scene.json", &scene);
    let out = dir.path().join("frames");
    let o = run(&["frames", &file, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(frame_files(&out).len(), 4);
    for k in 0..3 {
        let svg = std::fs::read_to_string(out.join(format!("frame_{k:03}.svg"))).unwrap();
        assert_eq!(svg.matches("class=\"scene-curve\"").count(), 2);
    }
}

#[test]
fn empty_schedule_is_rejected() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "arch.json", ARCH);
    let out = dir.path().join("frames");
    let o = run(&["frames", &file, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("t_schedule"), "{}", stderr(&o));
    assert!(!out.exists());
}
