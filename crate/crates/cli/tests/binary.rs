use std::path::PathBuf;
use std::process::{Command, Output};

use poisson_avg_cli::parse_spec;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

fn poisson_avg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poisson-avg")).args(args).output().expect("binary runs")
}

fn report(path: &std::path::Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn check_jacobi_exit_codes() {
    let flat = fixture("flat");
    assert_eq!(poisson_avg(&["check-jacobi", "--spec", flat.to_str().unwrap()]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("r.json");
    let bad = fixture("nonintegrable");
    let out = poisson_avg(&["check-jacobi", "--spec", bad.to_str().unwrap(), "--report", rep.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&rep);
    assert_eq!(r["passed"], false);
    assert!(r["checks"][0]["witness"]["detail"].as_str().unwrap().contains("[[Π, Π]]"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn full_pipeline_writes_averaged_model() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("r.json");
    let model = dir.path().join("avg.json");
    let e4 = fixture("e4");
    let out = poisson_avg(&[
        "full-pipeline",
        "--spec",
        e4.to_str().unwrap(),
        "--report",
        rep.to_str().unwrap(),
        "--output",
        model.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&rep);
    for field in ["connection", "sigma", "p", "pi"] {
        assert!(r["output"][field].is_object(), "output lacks {field}");
    }
    let averaged = parse_spec(&model).unwrap();
    assert!(averaged.data.is_some() && averaged.pi.is_some());
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let e4 = fixture("e4");
    let mut texts = Vec::new();
    for k in 0..2 {
        let rep = dir.path().join(format!("r{k}.json"));
        let out = poisson_avg(&["gauge", "--spec", e4.to_str().unwrap(), "--format", "json", "--report", rep.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        texts.push((out.stdout, std::fs::read(&rep).unwrap()));
    }
    assert_eq!(texts[0], texts[1]);
    assert_eq!(texts[0].0, texts[0].1);
}

#[test]
fn moser_verify_on_leaf() {
    let leaf = fixture("leaf");
    let out = poisson_avg(&["moser-verify", "--spec", leaf.to_str().unwrap(), "--format", "json"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    let r: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!(r["values"]["max-deviation"].as_str().unwrap().parse::<f64>().unwrap() <= 1e-6);
}

#[test]
fn usage_errors_exit_two() {
    let bad = fixture("nonintegrable");
    let missing = fixture("missing");
    for args in [
        vec!["adiabatic", "--spec", bad.to_str().unwrap()],
        vec!["check-jacobi", "--spec", missing.to_str().unwrap()],
        vec!["no-such-command", "--spec", bad.to_str().unwrap()],
        vec!["check-jacobi"],
    ] {
        assert_eq!(poisson_avg(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn malformed_spec_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"name": "b", "coordinates": ["u", "v", "w"], "pi": {"u v w": "1"}}"#).unwrap();
    let out = poisson_avg(&["check-jacobi", "--spec", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pi.u v w"));
}
