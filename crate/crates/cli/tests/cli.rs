use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn parind(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parind"))
        .args(args)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .env_remove("PARIND_CACHE")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn schema(name: &str) -> JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(format!("{name}.json"));
    let raw: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    JSONSchema::compile(&raw).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn assert_valid(name: &str, v: &Value) {
    let s = schema(name);
    if let Err(errors) = s.validate(v) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{name} schema rejects output: {msgs:?}\n{v:#}");
    };
}

/// Runs a successful command and validates envelope and payload.
fn ok(args: &[&str], payload_schema: &str) -> Value {
    let out = parind(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_valid("envelope", &v);
    assert_valid(payload_schema, &v["payload"]);
    v
}

fn fails(args: &[&str], code: i32) -> Value {
    let out = parind(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_valid("error", &v);
    assert_eq!(v["error"]["exit_code"], code);
    v
}

#[test]
fn classify_examples() {
    let v = ok(&["classify", "--q", "3", "--n", "1", "--case", "unramified", "--theta", "2", "--nu", "3"], "classify");
    assert_eq!(v["payload"]["reducible"], true);
    assert_eq!(v["command"], "classify");
    assert_eq!(v["timestamp"], "2023-11-14T22:13:20Z");

    let v = ok(&["classify", "--q", "3", "--n", "2", "--case", "unramified", "--theta", "1", "--nu", "-1"], "classify");
    assert_eq!(v["payload"]["reducible"], false);
    assert_eq!(v["payload"]["commutative_case"], true);

    let v = ok(&["classify", "--q", "3", "--n", "1", "--case", "unramified", "--theta", "1", "--nu", "3"], "classify");
    assert_eq!(v["payload"]["reducible"], false);
    assert_eq!(v["payload"]["condition"], false);
}

#[test]
fn classify_exact_scalar_encoding() {
    let v = ok(&["classify", "--q", "3", "--n", "2", "--case", "ramified", "--theta", "2", "--nu", "1/3"], "classify");
    let p = &v["payload"];
    assert_eq!(p["reducible"], true);
    assert_eq!(p["nu_zeta"]["num"], "1");
    assert_eq!(p["nu_zeta"]["den"], "3");
    assert_eq!(p["delta_p_zeta"]["den"], "81");
    let v = ok(&["classify", "--q", "3", "--n", "1", "--case", "ramified", "--theta", "0", "--nu", "sqrtq"], "classify");
    assert_eq!(v["payload"]["nu_zeta"]["sqrtq_num"], "1");
    assert!(v["payload"]["hecke"].is_null());
}

#[test]
fn classify_batch_and_float_backend() {
    let v = ok(
        &["classify", "--q", "3", "--n", "1", "--case", "unramified", "--theta", "all", "--nu", "3", "--nu", "0.5"],
        "classify",
    );
    let arr = v["payload"].as_array().unwrap();
    assert_eq!(arr.len(), 16);
    let reducible: Vec<u64> = arr
        .iter()
        .filter(|r| r["reducible"] == true)
        .map(|r| r["a"].as_u64().unwrap())
        .collect();
    assert_eq!(reducible, vec![0, 2, 4, 6]);
    let f = ok(
        &["--backend", "float", "classify", "--q", "3", "--n", "1", "--case", "unramified", "--theta", "2", "--nu", "1/3"],
        "classify",
    );
    assert_eq!(f["payload"]["reducible"], true);
    assert!(f["payload"]["nu_zeta"]["re"].is_number());
}

#[test]
fn exit_codes() {
    fails(&["classify", "--q", "4", "--n", "1", "--case", "unramified", "--theta", "0", "--nu", "1"], 2);
    fails(&["classify", "--q", "3", "--n", "1", "--case", "sideways", "--theta", "0", "--nu", "1"], 2);
    fails(&["classify", "--q", "3", "--n", "1", "--case", "unramified", "--theta", "0", "--nu", "zzz"], 2);
    fails(&["classify", "--q", "3", "--n", "1", "--case", "unramified", "--theta", "0", "--nu", "0"], 2);
    fails(&["--tol", "0", "chars", "enumerate", "--q", "3", "--n", "1", "--case", "ramified"], 2);
    fails(&["chars", "enumerate", "--q", "7", "--n", "5", "--case", "unramified"], 3);
    fails(&["group", "build", "--type", "sp", "--n", "2", "--q", "5"], 3);
    fails(&["hecke", "verify", "--group", "gu", "--n", "2", "--q", "3", "--theta", "1"], 3);
    fails(&["rep", "cuspidal", "--q", "3", "--theta", "4"], 2);
    let out = parind(&["--help"]);
    assert!(out.status.success());
}

#[test]
fn verify_examples() {
    let v = ok(&["verify", "--group", "gu", "--n", "1", "--q", "3", "--theta", "2"], "verify");
    assert_eq!(v["summary"]["pass"], true);
    assert_eq!(v["payload"]["dimension"], 2);
    assert!((v["payload"]["lambda"].as_f64().unwrap() - 3.0).abs() < 1e-9);

    let v = ok(&["hecke", "verify", "--group", "gu", "--n", "1", "--q", "3", "--theta", "1"], "verify");
    assert_eq!(v["payload"]["dimension"], 1);
    assert_eq!(v["payload"]["note"], "induced irreducible at finite level");
    assert_eq!(v["summary"]["pass"], true);
}

#[test]
fn verify_symplectic() {
    let v = ok(&["verify", "--group", "sp", "--n", "2", "--q", "3", "--theta", "2"], "verify");
    let p = &v["payload"];
    assert!((p["lambda"].as_f64().unwrap() - 3.0).abs() < 1e-6);
    assert!((p["raw"][0].as_f64().unwrap() - 6.0).abs() < 1e-6);
    assert!((p["raw"][1].as_f64().unwrap() - 27.0).abs() < 1e-6);
    assert_eq!(p["index"], 27);
}

#[test]
fn chars_enumerate() {
    let v = ok(&["chars", "enumerate", "--q", "3", "--n", "3", "--case", "unramified", "--filter", "regular-and-condition"], "chars");
    let list = v["payload"].as_array().unwrap();
    assert!(list.iter().any(|c| c["a"] == 26 && c["witness"] == 2));
    assert!(list.iter().all(|c| c["regular"] == true && c["condition"] == true));
}

#[test]
fn group_build_and_cache_transparency() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let cold = parind(&["group", "build", "--type", "gu", "--n", "1", "--q", "3", "--cache", d]);
    assert!(cold.status.success());
    assert!(String::from_utf8_lossy(&cold.stderr).contains("cache miss"));
    let warm = parind(&["group", "build", "--type", "gu", "--n", "1", "--q", "3", "--cache", d]);
    assert!(String::from_utf8_lossy(&warm.stderr).contains("cache hit"));
    assert_eq!(cold.stdout, warm.stdout);
    let v = json(&warm);
    assert_valid("group", &v["payload"]);
    assert_eq!(v["payload"]["order"], 96);
    assert_eq!(v["payload"]["num_double_cosets"], 2);

    // The environment variable supplies the same directory.
    let env_run = Command::new(env!("CARGO_BIN_EXE_parind"))
        .args(["group", "build", "--type", "gu", "--n", "1", "--q", "3"])
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .env("PARIND_CACHE", d)
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&env_run.stderr).contains("cache hit"));
    assert_eq!(json(&env_run)["payload"], v["payload"]);

    let uncached = ok(&["group", "build", "--type", "gu", "--n", "1", "--q", "3"], "group");
    assert_eq!(uncached["payload"], v["payload"]);

    let verify_cached = ok(&["verify", "--group", "gu", "--n", "1", "--q", "3", "--theta", "2", "--cache", d], "verify");
    let verify_plain = ok(&["verify", "--group", "gu", "--n", "1", "--q", "3", "--theta", "2"], "verify");
    assert_eq!(verify_cached["payload"], verify_plain["payload"]);
}

#[test]
fn outputs_are_byte_stable() {
    let args = ["chars", "enumerate", "--q", "5", "--n", "2", "--case", "ramified"];
    let a = parind(&args);
    let b = parind(&args);
    assert_eq!(a.stdout, b.stdout);
    let args = ["rep", "cuspidal", "--q", "3", "--theta", "1"];
    assert_eq!(parind(&args).stdout, parind(&args).stdout);
}

#[test]
fn rep_cuspidal_with_model() {
    let dir = tempfile::tempdir().unwrap();
    let path: PathBuf = dir.path().join("model.json");
    let v = ok(&["rep", "cuspidal", "--q", "3", "--theta", "1", "--model", path.to_str().unwrap()], "rep");
    let p = &v["payload"];
    assert_eq!(p["num_classes"], 8);
    let sizes: u64 = p["classes"].as_array().unwrap().iter().map(|c| c["size"].as_u64().unwrap()).sum();
    assert_eq!(sizes, 48);
    assert_eq!(p["model"]["green_constant_is_constant"], true);
    assert_eq!(p["model"]["green_constant"]["re"], -1.0);
    let model: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(model["elements"].as_array().unwrap().len(), 48);
    assert_eq!(model["dim"], 2);
}

#[test]
fn module_oracle() {
    let v = ok(&["module", "oracle", "--q", "3", "--n", "1", "--case", "unramified", "--scan", "-10:10:1000"], "module");
    let p = &v["payload"];
    assert_eq!(p["agree"], true);
    assert_eq!(p["closed_form"].as_array().unwrap().len(), 3);
    assert!(p["scan"]["unexplained"].as_array().unwrap().is_empty());
    assert_eq!(v["summary"]["pass"], true);
    let off = ok(&["module", "oracle", "--q", "3", "--n", "2", "--case", "unramified"], "module");
    assert_eq!(off["payload"]["applicable"], false);
    fails(&["module", "oracle", "--q", "3", "--n", "1", "--case", "unramified", "--scan", "1:0:5"], 2);
}

#[test]
fn selftest_subsets_and_backends() {
    let exact = ok(&["selftest", "--only", "chars"], "selftest");
    let crit = exact["payload"]["criteria"].as_array().unwrap();
    assert_eq!(crit.len(), 1);
    assert_eq!(crit[0]["id"], 2);
    let e = ok(&["selftest", "--only", "classify", "--only", "negative-control"], "selftest");
    let f = ok(&["--backend", "float", "selftest", "--only", "classify", "--only", "negative-control"], "selftest");
    let verdicts = |v: &Value| -> Vec<Value> {
        v["payload"]["criteria"].as_array().unwrap().iter().map(|c| c["pass"].clone()).collect()
    };
    assert_eq!(verdicts(&e), verdicts(&f));
    assert_eq!(e["summary"]["passed"], 2);
    fails(&["selftest", "--only", "bogus"], 2);
}

#[test]
fn table_format() {
    let out = parind(&["--format", "table", "classify", "--q", "3", "--n", "1", "--case", "unramified", "--theta", "2", "--nu", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "payload.reducible = true"));
}
