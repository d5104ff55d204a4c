use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn slicekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slicekit"))
        .args(args)
        .env_remove("SLICEKIT_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn quaternion(v: &Value) -> [f64; 4] {
    let a = v.as_array().expect("4-array");
    [0, 1, 2, 3].map(|k| a[k].as_f64().unwrap())
}

fn close(a: [f64; 4], b: [f64; 4], tol: f64) -> bool {
    a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn sqrt_loop_value_is_k() {
    let out = slicekit(&["monodromy", "--model", "sqrt", "--units", "[1,0,0];[0,1,0]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(close(quaternion(&v["value"]), [0.0, 0.0, 0.0, 1.0], 1e-12));
    assert!(close(quaternion(&v["germ_key"]["point"]), [1.0, 0.0, 0.0, 0.0], 1e-12));
    assert_eq!(v["parts"], 2);
    assert!(v["deviation"].as_f64().unwrap() < 1e-12);
}

#[test]
fn log_loop_value() {
    let out = slicekit(&["monodromy", "--model", "log", "--units", "i;j"]);
    assert_eq!(out.status.code(), Some(0));
    let pi = std::f64::consts::PI;
    assert!(close(quaternion(&json(&out)["value"]), [0.0, pi, -pi, 0.0], 1e-12));
}

#[test]
fn expectation_decides_the_exit_code() {
    let ok = slicekit(&["monodromy", "--units", "i;j", "--expect", "[0,0,0,1]"]);
    assert_eq!(ok.status.code(), Some(0));
    let wrong = slicekit(&["monodromy", "--units", "i;j", "--expect", "[0,0,0,-1]"]);
    assert_eq!(wrong.status.code(), Some(1));
}

#[test]
fn path_file_with_five_half_turns() {
    let path = temp_file(
        "five.json",
        r#"{"segments":[{"kind":"arc","center":[0,0],"radius":1,"theta0":0,"theta1":15.707963267948966}]}"#,
    );
    let out = slicekit(&["monodromy", "--path", path.to_str().unwrap(), "--units", "[0,0.8,0.6]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(close(quaternion(&v["value"]), [0.0, 0.0, 0.8, 0.6], 1e-12));
    assert!(close(quaternion(&v["germ_key"]["point"]), [-1.0, 0.0, 0.0, 0.0], 1e-12));
    assert!(v.get("reference").is_none());
}

#[test]
fn csv_table_follows_the_path() {
    let out = slicekit(&["monodromy", "--units", "i;j", "--format", "csv", "--samples", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,re,im,w,x,y,z");
    assert_eq!(lines.len(), 6);
    let last: Vec<f64> = lines[5].split(',').map(|s| s.parse().unwrap()).collect();
    assert!(close([last[3], last[4], last[5], last[6]], [0.0, 0.0, 0.0, 1.0], 1e-12));
}

#[test]
fn malformed_input_exits_with_2() {
    let bad = temp_file("bad.json", r#"{"segments": [ {"kind": "arc""#);
    let out = slicekit(&["monodromy", "--path", bad.to_str().unwrap(), "--units", "i"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(slicekit(&["monodromy", "--units", "[1,1,0];i"]).status.code(), Some(2));
    assert_eq!(slicekit(&["monodromy", "--units", "i"]).status.code(), Some(2));
    assert_eq!(slicekit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(slicekit(&["check", "nonsense"]).status.code(), Some(2));
}

#[test]
fn branch_point_crossing_exits_with_3() {
    let through = temp_file("through.json", r#"{"segments":[{"kind":"line","from":[1,0],"to":[-1,0]}]}"#);
    let out = slicekit(&["monodromy", "--path", through.to_str().unwrap(), "--units", "i"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn representation_vectors() {
    let out = slicekit(&["repformula", "--model", "log", "--units", "[0,1,0];[0,0,1]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let pi = std::f64::consts::PI;
    let g: Vec<[f64; 4]> = v["G"].as_array().unwrap().iter().map(quaternion).collect();
    let expected = [[0.0; 4], [pi, 0.0, 0.0, 0.0], [0.0; 4], [pi, 0.0, 0.0, 0.0]];
    for (a, b) in g.iter().zip(&expected) {
        assert!(close(*a, *b, 1e-12));
    }
    assert!(close(quaternion(&v["value"]), [0.0, 0.0, pi, -pi], 1e-12));
    assert_eq!(v["invariance_dev"].as_f64().unwrap(), 0.0);
}

#[test]
fn representation_vector_with_other_units() {
    let units = temp_file(
        "units.json",
        r#"{"N":2,"rows":[[[0,1,0],[0,1,0]],[[0,1,0],[0,-1,0]],[[0,-1,0],[0,1,0]],[[0,0.6,0.8],[0.8,0,0.6]]]}"#,
    );
    let out = slicekit(&["repformula", "--J", units.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["invariance_dev"].as_f64().unwrap() < 1e-8);

    let repeated = temp_file(
        "repeated.json",
        r#"{"N":1,"rows":[[[1,0,0]],[[1,0,0]]]}"#,
    );
    let path = temp_file("half.json", r#"{"segments":[{"kind":"line","from":[1,0],"to":[2,0]}]}"#);
    let out = slicekit(&["repformula", "--J", repeated.to_str().unwrap(), "--path", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn star_product_of_polynomials() {
    let f = temp_file("f.json", r#"{"coeffs":[[0,0,0,0],[0,1,0,0]]}"#);
    let g = temp_file("g.json", r#"{"coeffs":[[0,0,0,0],[0,0,1,0]]}"#);
    let out = slicekit(&["starprod", "--coeffs", f.to_str().unwrap(), "--right", g.to_str().unwrap(), "--at", "[0,0,1,0]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let coeffs: Vec<[f64; 4]> = v["coeffs"].as_array().unwrap().iter().map(quaternion).collect();
    assert_eq!(coeffs, vec![[0.0; 4], [0.0; 4], [0.0, 0.0, 0.0, 1.0]]);
    // (q i) * (q j) = q^2 k, which is -k at q = j.
    assert!(close(quaternion(&v["value"]), [0.0, 0.0, 0.0, -1.0], 1e-12));
    assert!(v["pointwise_dev"].as_f64().unwrap() < 1e-12);
}

#[test]
fn stem_file_round_trip_validates() {
    let out = slicekit(&["stem", "--model", "sqrt"]);
    assert_eq!(out.status.code(), Some(0));
    let file = temp_file("stem.json", std::str::from_utf8(&out.stdout).unwrap());
    let v = json(&out);
    assert_eq!(v["x0"], 1.0);
    assert_eq!(v["paths"].as_array().unwrap().len(), v["samples"].as_array().unwrap().len());

    let checked = slicekit(&["stem", "--input", file.to_str().unwrap()]);
    assert_eq!(checked.status.code(), Some(0), "{}", String::from_utf8_lossy(&checked.stdout));
    assert_eq!(json(&checked)["passed"], true);
}

#[test]
fn stem_validation_of_a_polynomial() {
    let f = temp_file("stem_poly.json", r#"{"coeffs":[[1,0,1,0],[0,1,0,0],[0.5,0,0,0.5]]}"#);
    let out = slicekit(&["stem", "--model", "poly", "--coeffs", f.to_str().unwrap(), "--validate"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["failed"].as_array().unwrap().len(), 0);
    assert!(v["conditions"]["local_holomorphy"]["max_deviation"].as_f64().unwrap() < 1e-6);
}

#[test]
fn check_suites_pass_and_report_deviations() {
    let out = slicekit(&["check", "unitarity", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["deviation"].as_f64().unwrap() < 1e-10);
    }
    let star = slicekit(&["check", "star"]);
    assert_eq!(star.status.code(), Some(0));
    let report = json(&star);
    let names: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"star_vs_kronecker"));
    let mut sorted = names.clone();
    sorted.sort_unstable();
    assert_eq!(names, sorted);
}

#[test]
fn impossible_tolerance_fails_the_check() {
    let out = slicekit(&["check", "repformula", "--tol=-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn output_is_deterministic_for_a_seed() {
    let a = slicekit(&["check", "ring", "--seed", "42"]);
    let b = slicekit(&["check", "ring", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
    let from_env = Command::new(env!("CARGO_BIN_EXE_slicekit"))
        .args(["check", "ring"])
        .env("SLICEKIT_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(a.stdout, from_env.stdout);
    let other = slicekit(&["check", "ring", "--seed", "43"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn csv_is_refused_where_unsupported() {
    assert_eq!(slicekit(&["repformula", "--format", "csv"]).status.code(), Some(2));
}
