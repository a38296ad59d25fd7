use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

use cokahler::io::cli::run;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cokahler").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (code, out, err) = invoke(&full);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn num(v: &Value, path: &str) -> f64 {
    let mut cur = v;
    for key in path.split('.') {
        cur = &cur[key];
    }
    if let Some(x) = cur.get("value") {
        cur = x;
    }
    cur.as_f64().unwrap_or_else(|| panic!("{path} is not a number: {cur}"))
}

fn temp_document(name: &str, body: &str) -> String {
    let path = std::env::temp_dir().join(format!("cokahler-cli-{}-{name}.json", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

/// Numeric leaves must agree to `tol`, everything else exactly.
fn assert_same(a: &Value, b: &Value, path: &str, tol: f64) {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            assert!((x - y).abs() <= tol, "{path}: {x} vs {y}");
        }
        (Value::Object(x), Value::Object(y)) => {
            let kx: Vec<_> = x.keys().collect();
            let ky: Vec<_> = y.keys().collect();
            assert_eq!(kx, ky, "{path}");
            for (k, v) in x {
                assert_same(v, &y[k], &format!("{path}.{k}"), tol);
            }
        }
        (Value::Array(x), Value::Array(y)) => {
            assert_eq!(x.len(), y.len(), "{path}");
            for (i, (u, v)) in x.iter().zip(y).enumerate() {
                assert_same(u, v, &format!("{path}[{i}]"), tol);
            }
        }
        _ => assert_eq!(a, b, "{path}"),
    }
}

#[test]
fn analyze_matches_golden_report() {
    let v = json(&["analyze", &fixture("einstein_example.json")]);
    let text = std::fs::read_to_string(fixture("einstein_example.analyze.json")).unwrap();
    let golden: Value = serde_json::from_str(&text).unwrap();
    assert_same(&v, &golden, "", 1e-9);
}

#[test]
fn analyze_reports_the_einstein_example() {
    let v = json(&["analyze", &fixture("einstein_example.json")]);
    assert_eq!(num(&v, "curvature.einstein_constant"), -1.5);
    assert_eq!(num(&v, "contact.tau_star"), -1.125);
    assert_eq!(num(&v, "contact.ratio"), 0.25);
    assert_eq!(v["contact"]["classification"], "almost-cokähler");
    assert_eq!(v["unimodularity"]["unimodular"], false);
    assert_eq!(num(&v, "contact.reeb.killing_defect_squared"), 1.5);
    assert_eq!(num(&v, "circle_product.s_star"), -4.5);
}

#[test]
fn text_format_is_the_default() {
    let (code, out, _) = invoke(&["classify", &fixture("einstein_example.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("almost-cokähler"), "{out}");
    assert!(serde_json::from_str::<Value>(&out).is_err());
}

#[test]
fn product_square_and_circle() {
    let v = json(&["product", "--square", &fixture("einstein_example.json")]);
    assert_eq!(num(&v, "s"), -15.0);
    assert_eq!(num(&v, "s_star"), -9.0);
    assert_eq!(num(&v, "nabla_kahler_squared"), 6.0);
    let v = json(&["product", "--with-circle", &fixture("einstein_example.json")]);
    assert_eq!(num(&v, "s"), -7.5);
}

#[test]
fn search_converges_and_verifies() {
    let v = json(&["search", &fixture("einstein_example.json"), "--seed", "3", "--seeds", "4"]);
    let text = v.to_string();
    assert!(text.contains("converged"), "{text}");
    assert_eq!(v["verification"]["contact"]["classification"], "almost-cokähler", "{text}");
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = invoke(&["verify", &fixture("einstein_example.json")]);
    assert_eq!(code, 0, "{out}");
    let (code, _, _) = invoke(&["verify", &fixture("heisenberg_r2.json")]);
    assert_eq!(code, 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(invoke(&["analyze", "--bogus", "x.json"]).0, 2);
    assert_eq!(invoke(&["frobnicate"]).0, 2);
    assert_eq!(invoke(&["product", &fixture("einstein_example.json")]).0, 2);
    assert_eq!(invoke(&["product", "--square", "--with-circle", &fixture("einstein_example.json")]).0, 2);
    assert_eq!(invoke(&["--tolerance", "0", "validate", &fixture("abelian5.json")]).0, 2);
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("search"));
}

#[test]
fn document_errors_exit_one() {
    let (code, out, err) = invoke(&["validate", "/nonexistent/cokahler.json"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.starts_with("error:"), "{err}");

    let degenerate = temp_document(
        "degenerate",
        r#"{"name":"bad","dimension":3,"differential":{"e3":[{"coeff":"1","monomial":[1,1]}]},"metric":"identity"}"#,
    );
    let (code, _, err) = invoke(&["validate", &degenerate]);
    assert_eq!(code, 1);
    assert!(err.contains("degenerate monomial"), "{err}");

    // de1 = e23, de2 = e14 gives d(de1) = e143
    let not_closed = temp_document(
        "dsquared",
        r#"{"name":"bad","dimension":4,"differential":{"e1":[{"coeff":"1","monomial":[2,3]}],"e2":[{"coeff":"1","monomial":[1,4]}]},"metric":"identity"}"#,
    );
    let (code, _, err) = invoke(&["validate", &not_closed]);
    assert_eq!(code, 1);
    assert!(err.contains("d^2"), "{err}");

    let bad_coeff = temp_document(
        "coeff",
        r#"{"name":"bad","dimension":3,"differential":{"e3":[{"coeff":"1/0","monomial":[1,2]}]},"metric":"identity"}"#,
    );
    let (code, _, err) = invoke(&["validate", &bad_coeff]);
    assert_eq!(code, 1);
    assert!(err.contains("division by zero"), "{err}");
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_cokahler");
    let ok = Command::new(bin).args(["validate", &fixture("abelian5.json")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let usage = Command::new(bin).arg("--nope").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
