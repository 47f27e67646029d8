use std::process::{Command, Output};

use sudsq::models::sud_singlet;

fn sudsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sudsq")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn selftest_exit_codes() {
    let ok = sudsq(&["selftest", "--seed", "3"]);
    assert_eq!(code(&ok), 0);
    let bad = sudsq(&["selftest", "--inject-fault", "basis-normalization"]);
    assert_eq!(code(&bad), 3);
    assert!(String::from_utf8_lossy(&bad.stdout).contains("orthonormality"));
}

#[test]
fn usage_errors() {
    assert_eq!(code(&sudsq(&["frobnicate"])), 1);
    assert_eq!(code(&sudsq(&["table", "4"])), 1);
    assert_eq!(code(&sudsq(&["scan", "--model", "sud-singlet", "--N", "3", "--tmin", "5", "--tmax", "1"])), 1);
    assert_eq!(code(&sudsq(&["polytope"])), 1);
    assert_eq!(code(&sudsq(&["--help"])), 0);
}

#[test]
fn invalid_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&sudsq(&["evaluate", missing.to_str().unwrap()])), 2);

    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "{\"d\": 3, \"n\": 1, \"rho\": [[[1.0, 0.0]]]}").unwrap();
    let o = sudsq(&["evaluate", garbled.to_str().unwrap()]);
    assert_eq!(code(&o), 2);

    let unnormalized = dir.path().join("trace.json");
    std::fs::write(&unnormalized, "{\"d\": 2, \"n\": 1, \"rho\": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]}").unwrap();
    let o = sudsq(&["evaluate", unnormalized.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("trace"));

    assert_eq!(code(&sudsq(&["polytope", "--N", "2", "--gexp", "5,0,0,0,0,0,0,0"])), 2);
    assert_eq!(code(&sudsq(&["scan", "--model", "spin", "--N", "3"])), 2);
}

#[test]
fn evaluate_singlet_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("singlet.json");
    std::fs::write(&path, sud_singlet(3, 3).unwrap().to_json().unwrap()).unwrap();
    let out = dir.path().join("report.json");
    let o = sudsq(&["evaluate", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!((v["xi_sud"]["value"].as_f64().unwrap() + 12.0).abs() < 1e-8);
    assert_eq!(v["ppt"]["detected"], true);
    assert_eq!(v["state"]["physical"], true);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn scan_and_figure_output_is_stable() {
    let args = ["scan", "--model", "sud-singlet", "--N", "3", "--criterion", "sud"];
    let a = sudsq(&args);
    let b = sudsq(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let t = v["result"]["limit_temperature"].as_f64().unwrap();
    assert!((t - 3.47).abs() < 0.02, "{t}");

    let f1 = sudsq(&["fig3"]);
    let f2 = sudsq(&["fig3"]);
    assert_eq!(code(&f1), 0);
    assert_eq!(f1.stdout, f2.stdout);
    assert_eq!(String::from_utf8_lossy(&f1.stdout).lines().count(), 25);
}

#[test]
fn polytope_report() {
    let o = sudsq(&["polytope", "--N", "4", "--d", "3"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["Lambda"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["vertices"]["A"].as_array().unwrap().len(), 8);
    assert!(v["constraint_residuals"].as_array().unwrap().iter().all(|r| r.as_f64().unwrap() < 1e-12));
}
