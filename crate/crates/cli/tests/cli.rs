use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use algsurg::commands::EXAMPLES;
use algsurg::format::{self, parse_json, render};

fn algsurg(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_algsurg"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn algsurg");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn example(args: &[&str]) -> String {
    let mut full = vec!["example"];
    full.extend_from_slice(args);
    let o = algsurg(&full, "");
    assert!(o.status.success(), "example {args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn sphere_homology_pipeline() {
    let o = algsurg(&["homology"], &example(&["sphere", "--n", "3"]));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "coefficients: Z\nH_0: Z\nH_1: 0\nH_2: 0\nH_3: Z\n");
}

#[test]
fn group_ring_homology_restricts_scalars() {
    let o = algsurg(&["homology"], &example(&["sphere", "--n", "1", "--ring", "Z[Z/2]"]));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "coefficients: Z (restricted from Z[Z/2])\nH_0: Z^2\nH_1: Z^2\n");
}

#[test]
fn hyperbolic_obstruction_is_zero() {
    let o = algsurg(&["obstruction"], &example(&["hyperbolic", "--n", "2", "--g", "2"]));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("witt_class: Arf = 0"));
    let o = algsurg(&["obstruction", "--format", "json"], &example(&["e8", "--n", "4"]));
    let v = parse_json(&stdout(&o), "out").unwrap();
    assert_eq!(v["witt_class"], "signature/8 = 1");
}

#[test]
fn every_example_round_trips_through_the_parser() {
    for (name, _) in EXAMPLES {
        let text = example(&[name, "--seed", "7"]);
        let v = parse_json(&text, name).unwrap();
        assert_eq!(render(&v), text, "{name} is not in canonical form");
        let o = algsurg(&["validate"], &text);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
}

#[test]
fn randomized_examples_are_deterministic() {
    for name in ["random-symmetric", "random-pair", "random-cobordism"] {
        assert_eq!(example(&[name, "--seed", "11"]), example(&[name, "--seed", "11"]));
    }
    assert_ne!(example(&["random-quadratic", "--seed", "1"]), example(&["random-quadratic", "--seed", "2"]));
}

#[test]
fn surgery_writes_effect_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.json");
    std::fs::write(&data, example(&["double-cover"])).unwrap();
    let out = dir.path().join("out");
    let o = algsurg(&["surger", "--data", data.to_str().unwrap(), "--out", out.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("effect_ranks: [2,2]"));
    let o = algsurg(&["homology", out.join("effect.json").to_str().unwrap()], "");
    assert_eq!(stdout(&o), "coefficients: Z\nH_0: Z^2\nH_1: Z^2\n");
    let o = algsurg(&["roundtrip", out.join("trace.json").to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("g_equivalence: true"));
}

#[test]
fn surgery_with_zero_target_returns_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let sphere = example(&["quadratic-sphere", "--n", "2"]);
    std::fs::write(dir.path().join("sphere.json"), &sphere).unwrap();
    let data = r#"{"boundary": "sphere.json", "target": {"ring": "Z", "lo": 0, "ranks": []}}"#;
    std::fs::write(dir.path().join("data.json"), data).unwrap();
    let o = algsurg(&["surger", "--data", dir.path().join("data.json").to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), sphere);
}

#[test]
fn files_may_reference_other_files() {
    let dir = tempfile::tempdir().unwrap();
    let v = parse_json(&example(&["double-cover"]), "dc").unwrap();
    std::fs::write(dir.path().join("boundary.json"), render(&v["boundary"])).unwrap();
    let mut v = v.clone();
    v["boundary"] = "boundary.json".into();
    let path = dir.path().join("data.json");
    std::fs::write(&path, render(&v)).unwrap();
    let o = algsurg(&["validate", path.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("document: pair"));
}

#[test]
fn exit_codes() {
    // malformed input names the entry
    let o = algsurg(&["validate"], r#"{"ring": "Z", "lo": 0, "ranks": [1, 1], "d": {"1": [["x"]]}}"#);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("d[1] entry (0,0)"));
    assert_eq!(algsurg(&["validate"], "not json").status.code(), Some(2));
    assert_eq!(algsurg(&["example", "no-such-fixture"], "").status.code(), Some(2));
    assert_eq!(algsurg(&["frobnicate"], "").status.code(), Some(2));
    // d∘d ≠ 0 is a validation failure
    let o = algsurg(&["validate"], r#"{"ring": "Z", "lo": 0, "ranks": [1, 1, 1], "d": {"1": [[1]], "2": [[1]]}}"#);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("complex: false"));
    // a broken structure fails validation
    let mut v = parse_json(&example(&["sphere", "--n", "2"]), "s").unwrap();
    v["maps"]["0"]["2"] = serde_json::json!([[5]]);
    let o = algsurg(&["validate"], &render(&v));
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    // the obstruction is only defined for even n
    let o = algsurg(&["obstruction"], &example(&["quadratic-sphere", "--n", "3"]));
    assert_eq!(o.status.code(), Some(2));
    // a non-Poincaré complex is refused
    let mut v = parse_json(&example(&["quadratic-sphere", "--n", "2"]), "s").unwrap();
    v["maps"]["0"]["2"] = serde_json::json!([[5]]);
    let o = algsurg(&["obstruction"], &render(&v));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dualize_and_cone() {
    let o = algsurg(&["dualize", "--n", "3"], &example(&["sphere", "--n", "3"]));
    assert_eq!(o.status.code(), Some(0));
    let dual = format::complex(&parse_json(&stdout(&o), "d").unwrap(), None, "d").unwrap();
    assert_eq!((dual.rank(0), dual.rank(3)), (1, 1));
    let s = parse_json(&example(&["sphere", "--n", "1"]), "s").unwrap();
    let c = serde_json::json!({"source": s.clone(), "target": s, "map": {"0": [[1]], "1": [[1]]}});
    let o = algsurg(&["cone"], &render(&c));
    assert_eq!(o.status.code(), Some(0));
    let o = algsurg(&["homology"], &stdout(&o));
    assert_eq!(stdout(&o), "coefficients: Z\nH_0: 0\nH_1: 0\nH_2: 0\n");
}

#[test]
fn invariants_and_witnesses() {
    let o = algsurg(&["invariants"], &example(&["e8-form"]));
    assert!(stdout(&o).contains("signature: 8"));
    let o = algsurg(&["invariants"], &example(&["arf-form"]));
    assert!(stdout(&o).contains("arf: 1"));
    let formation = example(&["hyperbolic-formation", "--g", "2", "--i", "1"]);
    assert_eq!(algsurg(&["trivial-witness"], &formation).status.code(), Some(0));
    let mut v = parse_json(&formation, "f").unwrap();
    v["G"] = v["F"].clone();
    let o = algsurg(&["trivial-witness"], &render(&v));
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("accepted: false"));
}

#[test]
fn output_directory_for_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = algsurg(&["example", "e8", "--out", dir.path().to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(Path::new(&dir.path().join("e8.json")).exists());
}
