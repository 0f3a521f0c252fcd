use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use isoknot::curve::Polyline;
use isoknot::metric::{polyline_is_simple_oracle, DEFAULT_CLEARANCE};
use isoknot::Vec3;
use serde_json::Value;

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

/// Runs the binary and returns its exit code and parsed stdout (Null when
/// stdout is empty).
fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_isoknot")).args(args).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let json = if text.trim().is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&text).unwrap_or_else(|e| panic!("bad JSON ({e}): {text}"))
    };
    (out.status.code().unwrap(), json)
}

fn assert_valid(schema: &str, doc: &Value) {
    let text = fs::read_to_string(schema_dir().join(format!("{schema}.schema.json"))).unwrap();
    let validator = jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}\n{doc:#}");
}

/// Runs a command expected to emit JSON and checks it against the
/// command's schema.
fn run_checked(args: &[&str]) -> (i32, Value) {
    let (code, doc) = run(args);
    assert_valid(args[0], &doc);
    (code, doc)
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

/// Plain `x,y,z[,t]` rows after an optional `closed=` line and header.
fn load_csv(path: &Path) -> Polyline {
    let text = fs::read_to_string(path).unwrap();
    let mut closed = false;
    let mut pts = Vec::new();
    for line in text.lines() {
        if let Some(flag) = line.strip_prefix("closed=") {
            closed = flag == "true";
        } else if !line.starts_with('x') {
            let c: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
            pts.push(Vec3::new(c[0], c[1], c[2]));
        }
    }
    Polyline::uniform(pts, closed).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    format!("pl_file:{}", p.display())
}

#[test]
fn curvature_examples() {
    let (code, doc) = run_checked(&["curvature", "--curve", "circle:r=1"]);
    assert_eq!(code, 0);
    assert!((f(&doc["value"]) - TAU).abs() < 1e-8);

    let (_, doc) = run_checked(&["curvature", "--curve", "helix:a=2,b=1,turns=1"]);
    // κ = a/(a² + b²), speed √(a² + b²), one turn of t ∈ [0, 2π]
    let oracle = 2.0 / 5.0 * TAU * 5f64.sqrt();
    assert!((f(&doc["value"]) - oracle).abs() < 1e-4);
    assert!((f(&doc["value"]) - 5.6199).abs() < 1e-4);

    let dir = tempfile::tempdir().unwrap();
    let sq = write(dir.path(), "square.csv", "closed=true\nx,y,z\n0,0,0\n1,0,0\n1,1,0\n0,1,0\n");
    let (_, doc) = run_checked(&["curvature", "--curve", &sq]);
    assert!((f(&doc["value"]) - 4.0 * PI / 2.0).abs() < 1e-12);
    assert_eq!(f(&doc["smooth_part"]), 0.0);

    let (_, doc) = run_checked(&["curvature", "--curve", "circle:r=1", "--window", "0,0.25"]);
    assert!((f(&doc["value"]) - PI / 2.0).abs() < 1e-8);
}

#[test]
fn tube_examples() {
    let (code, doc) = run_checked(&["tube", "--curve", "circle:r=1", "--safety", "0.9"]);
    assert_eq!(code, 0);
    assert!((f(&doc["r"]) - 0.9).abs() < 1e-9);
    let (_, doc) = run_checked(&["tube", "--curve", "circle:r=2", "--safety", "0.5", "--grid", "100"]);
    assert!((f(&doc["r"]) - 1.0).abs() < 1e-9);
}

#[test]
fn inscribe_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("circle");
    let (code, doc) = run_checked(&["inscribe", "--curve", "circle:r=1", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(doc["passed"], true);
    let cert: Value = serde_json::from_str(&fs::read_to_string(out.join("certificate.json")).unwrap()).unwrap();
    assert_valid("certificate", &cert);
    assert_eq!(cert["passed"], true);
    assert_eq!(load_csv(&out.join("polyline.csv")).len() as u64, doc["vertices"].as_u64().unwrap());

    let out = dir.path().join("trefoil");
    let (code, doc) = run_checked(&["inscribe", "--curve", "torus_knot:p=2,q=3,R=2,rho=0.5", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(doc["certificate"]["passed"], true);
    let p = load_csv(&out.join("polyline.csv"));
    assert!(p.closed());
    assert!(polyline_is_simple_oracle(&p, DEFAULT_CLEARANCE));
    assert!(f(&doc["hausdorff"]) < f(&doc["certificate"]["r_used"]["r"]));

    let (code, doc) = run_checked(&["inscribe", "--curve", "segment:length=3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["vertices"], 2);
    assert_eq!(doc["polyline_file"], Value::Null);
}

#[test]
fn converge_examples() {
    let (code, doc) = run_checked(&["converge", "--curve", "offset_helix:a=2,b=1,turns=1", "--sequence", "offset"]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "FOUND");
    let n = doc["index"].as_u64().unwrap();
    assert!((1..=64).contains(&n));
    assert_eq!(doc["certificate"]["passed"], true);
    assert_eq!(doc["trials"].as_array().unwrap().len() as u64, n);

    let (code, doc) = run_checked(&["converge", "--curve", "circle:r=1", "--sequence", "refinement"]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "FOUND");

    let (code, doc) = run_checked(&["converge", "--curve", "circle:r=1", "--i-max", "0"]);
    assert_eq!(code, 3);
    assert_eq!(doc["status"], "NOT_FOUND");
    assert_eq!(doc["index"], Value::Null);

    // the offset sequence only makes sense for an offset helix
    let (code, _) = run(&["converge", "--curve", "circle:r=1", "--sequence", "offset"]);
    assert_eq!(code, 2);
}

#[test]
fn push_demo_writes_fifty_frames() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(dir.path(), "tri.csv", "closed=false\n0,0,0\n1,1,0\n2,0,0\n");
    let obj = dir.path().join("trace.obj");
    let (code, doc) = run_checked(&["push-demo", "--curve", &tri, "--vertex", "1", "--out", obj.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(doc["frames"], 50);
    assert_eq!(doc["monotone"], true);
    let text = fs::read_to_string(obj).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("o ")).count(), 50);
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 150);

    let (code, _) = run(&["push-demo", "--curve", &tri, "--vertex", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let (code, doc) = run_checked(&["export", "--curve", "torus_knot:p=2,q=3,R=2,rho=0.5", "--samples", "97", "--out", a.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(doc["vertices"], 97);
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    run_checked(&["export", "--curve", &format!("pl_file:{}", a.display()), "--out", b.to_str().unwrap()]);
    run_checked(&["export", "--curve", &format!("pl_file:{}", b.display()), "--out", c.to_str().unwrap()]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(fs::read(&b).unwrap(), fs::read(&c).unwrap());

    let obj = dir.path().join("k.obj");
    run_checked(&["export", "--curve", "circle:r=1", "--samples", "8", "--format", "obj", "--out", obj.to_str().unwrap()]);
    let text = fs::read_to_string(obj).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 8);
    assert!(text.contains("l 1 2 3 4 5 6 7 8 1"));
}

#[test]
fn property_runs_are_deterministic() {
    for name in ["fenchel", "convex", "simplicity", "push"] {
        let (code, a) = run_checked(&["property", "--name", name, "--trials", "100", "--seed", "7"]);
        assert_eq!(code, 0, "{a}");
        let (_, b) = run(&["property", "--name", name, "--trials", "100", "--seed", "7"]);
        assert_eq!(a, b);
    }
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["curvature", "--curve", "spiral:r=1"][..],
        &["curvature", "--curve", "circle:r=-1"],
        &["curvature", "--curve", "circle:r=1", "--window", "0.5"],
        &["tube", "--curve", "helix:a=1,b=1"],
        &["curvature", "--curve", "pl_file:/nonexistent/file.csv"],
        &["property", "--name", "fenchel", "--seed", "x"],
        &["frobnicate"],
    ] {
        let (code, doc) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert_eq!(doc, Value::Null);
    }
    let help = Command::new(env!("CARGO_BIN_EXE_isoknot")).args(["inscribe", "--help"]).output().unwrap();
    assert!(help.status.success());
    // module defaults are surfaced in the help text
    assert!(String::from_utf8(help.stdout).unwrap().contains("[default: 0.9]"));
}

#[test]
fn thread_cap_does_not_change_output() {
    let run_with = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_isoknot"))
            .args(["inscribe", "--curve", "torus_knot:p=2,q=3,R=2,rho=0.5"])
            .env("ISOKNOT_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run_with("1"), run_with("4"));
    let out = Command::new(env!("CARGO_BIN_EXE_isoknot"))
        .args(["curvature", "--curve", "circle:r=1"])
        .env("ISOKNOT_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
