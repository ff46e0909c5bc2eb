use std::path::PathBuf;
use std::process::Command;

use monic_rank::cli::{run_with_io, EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK};
use serde_json::Value;

fn schema_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn call(args: &[&str]) -> (i32, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("monic-rank").chain(args.iter().copied());
    let code = run_with_io(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn assert_valid(doc: &str, schema: &str) -> Value {
    let path = schema_dir().join(format!("{schema}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let instance: Value = serde_json::from_str(doc).unwrap();
    let errors: Vec<String> = validator.iter_errors(&instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{} against {}: {errors:?}", doc, path.display());
    instance
}

fn strip_timing(mut v: Value) -> Value {
    match &mut v {
        Value::Object(map) => {
            map.remove("elapsed_ms");
            for x in map.values_mut() {
                *x = strip_timing(x.take());
            }
        }
        Value::Array(items) => {
            for x in items.iter_mut() {
                *x = strip_timing(x.take());
            }
        }
        _ => {}
    }
    v
}

const SLN3: &str = r#"[[1, 2, 3], [0, -1, 1], [1, 1, 0]]"#;
const TENSOR2: &str = r#"{"a": [[2, 1], [1, 1]], "b": [[1, 1], [1, 1]]}"#;
const TENSOR3: &str = r#"{"a": [[3, 1], [2, 0]], "b": [[1, 0], [5, 1]]}"#;
const TENSOR_ONE_ZERO: &str = r#"{"a": [[2, 0], [0, 1]], "b": [[0, 1], [0, 0]]}"#;

#[test]
fn documents_match_their_schemas() {
    let cases: Vec<(Vec<&str>, i32, &str)> = vec![
        (vec!["shapiro", "verify", "--k", "2", "--d", "2", "--e", "2"], EXIT_OK, "shapiro_step"),
        (vec!["shapiro", "chain", "--k", "2", "--d", "2", "--e-max", "2"], EXIT_OK, "shapiro_chain"),
        (vec!["decompose", "binary", "--json", "[3, 0, 1, 0]"], EXIT_OK, "certificate"),
        (vec!["decompose", "matrix", "--json", "[[2, 1], [1, 3]]"], EXIT_OK, "certificate"),
        (vec!["decompose", "symmetric", "--json", "[[2, 1], [1, 3]]"], EXIT_OK, "certificate"),
        (vec!["decompose", "tensor", "--json", TENSOR2, "--k", "3", "--seed", "4"], EXIT_ERROR, ""),
        (vec!["decompose", "tensor", "--json", TENSOR3, "--seed", "5"], EXIT_OK, "certificate"),
        (vec!["decompose", "tensor", "--json", TENSOR_ONE_ZERO], EXIT_NEGATIVE, "non_member"),
        (vec!["decompose", "tensor", "--json", TENSOR_ONE_ZERO, "--classify"], EXIT_NEGATIVE, "tensor_classification"),
        (vec!["decompose", "sln", "--json", SLN3, "--seed", "9"], EXIT_OK, "certificate"),
        (vec!["decompose", "matrix", "--json", "[[1, 0], [0, 1]]"], EXIT_NEGATIVE, "non_member"),
        (vec!["secant", "dim", "--variety", "tensor222", "--k", "2"], EXIT_OK, "secant_dim"),
        (vec!["secant", "dim", "--variety", "powers:3,2", "--k-max", "3"], EXIT_OK, "secant_staircase"),
        (vec!["secant", "rank", "--variety", "rank-one:2,2", "--k-max", "4"], EXIT_OK, "secant_rank"),
    ];
    for (args, code, schema) in cases {
        let (got, out) = call(&args);
        assert_eq!(got, code, "{args:?}: {out}");
        if !schema.is_empty() {
            assert_valid(&out, schema);
        }
    }
}

#[test]
fn certify_accepts_its_own_certificates_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let path_str = path.to_str().unwrap();
    let (code, _) = call(&["decompose", "sln", "--json", SLN3, "--output", path_str]);
    assert_eq!(code, EXIT_OK);
    let (code, out) = call(&["certify", "--input", path_str]);
    assert_eq!(code, EXIT_OK, "{out}");
    let doc = assert_valid(&out, "verification");
    assert_eq!(doc["verification"]["valid"], Value::Bool(true));

    let mut cert: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    cert["target"][0][0] = serde_json::json!(7.0);
    std::fs::write(&path, serde_json::to_string(&cert).unwrap()).unwrap();
    let (code, out) = call(&["certify", "--input", path_str]);
    assert_eq!(code, EXIT_NEGATIVE, "{out}");
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let runs: [&[&str]; 6] = [
        &["decompose", "sln", "--json", SLN3, "--seed", "3"],
        &["decompose", "tensor", "--json", TENSOR3, "--seed", "5"],
        &["decompose", "binary", "--json", "[4, 1, 0, 2, 1]"],
        &["secant", "dim", "--variety", "sln:3", "--k-max", "3", "--seed", "8"],
        &["secant", "rank", "--variety", "tensor222", "--csv"],
        &["shapiro", "verify", "--k", "3", "--d", "3", "--e", "2"],
    ];
    for args in runs {
        let (c1, a) = call(args);
        let (c2, b) = call(args);
        assert_eq!(c1, c2);
        if args[0] == "shapiro" {
            let (a, b): (Value, Value) = (serde_json::from_str(&a).unwrap(), serde_json::from_str(&b).unwrap());
            assert_eq!(strip_timing(a), strip_timing(b));
        } else {
            assert_eq!(a, b, "{args:?}");
        }
    }
}

#[test]
fn binary_writes_the_same_bytes_as_the_library_entry_point() {
    let args = ["decompose", "sln", "--json", SLN3, "--seed", "2"];
    let out = Command::new(env!("CARGO_BIN_EXE_monic-rank")).args(args).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let (_, expected) = call(&args);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expected);
}

#[test]
fn invalid_inputs_exit_with_error() {
    for args in [
        &["decompose", "binary", "--json", "not json"][..],
        &["decompose", "sln", "--json", "[[1, 0], [0, 1]]"],
        &["shapiro", "verify", "--k", "2", "--d", "2", "--e", "2", "--prime", "100"],
        &["secant", "dim", "--variety", "nonsense", "--k", "1"],
        &["bogus"],
    ] {
        assert_eq!(call(args).0, EXIT_ERROR, "{args:?}");
    }
    assert_eq!(call(&["--help"]).0, EXIT_OK);
}
