mod common;

use std::path::PathBuf;
use std::process::{Command, Output};

use qframe::bell::{chsh_value, eta_behavior, fine_joint_readout, lhv_membership, sample_outcomes, tsirelson_settings};
use qframe::process::{eta_measurement, negativity, MeasurementAxis};
use qframe::two_qubit::singlet;
use serde_json::Value;

fn qframe(args: &[&str]) -> Output {
    Command::new(common::qframe_bin())
        .args(args)
        .env_remove(qframe::SEED_ENV)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Same shape, equal strings and booleans, numbers within `1e-12`.
fn assert_json_close(actual: &Value, expected: &Value, path: &str) {
    match (actual, expected) {
        (Value::Number(a), Value::Number(b)) => {
            let (a, b) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            assert!((a - b).abs() <= 1e-12, "{path}: {a} vs {b}");
        }
        (Value::Array(a), Value::Array(b)) => {
            assert_eq!(a.len(), b.len(), "{path}: length");
            for (k, (x, y)) in a.iter().zip(b).enumerate() {
                assert_json_close(x, y, &format!("{path}[{k}]"));
            }
        }
        (Value::Object(a), Value::Object(b)) => {
            let keys = |m: &serde_json::Map<String, Value>| m.keys().cloned().collect::<Vec<_>>();
            assert_eq!(keys(a), keys(b), "{path}: keys");
            for (k, v) in a {
                assert_json_close(v, &b[k], &format!("{path}.{k}"));
            }
        }
        _ => assert_eq!(actual, expected, "{path}"),
    }
}

/// Compares against the stored file; `QFRAME_UPDATE_GOLDEN=1` rewrites it.
fn check_golden(name: &str, text: &str) {
    let path = golden_path(name);
    if std::env::var_os("QFRAME_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, text).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    if name.ends_with(".json") {
        let a: Value = serde_json::from_str(text).unwrap();
        let b: Value = serde_json::from_str(&expected).unwrap();
        assert_json_close(&a, &b, name);
    } else {
        assert_eq!(text.lines().count(), expected.lines().count());
        for (x, y) in text.lines().zip(expected.lines()) {
            let xs: Vec<&str> = x.split(',').collect();
            let ys: Vec<&str> = y.split(',').collect();
            assert_eq!(xs.len(), ys.len());
            for (u, v) in xs.iter().zip(&ys) {
                match (u.parse::<f64>(), v.parse::<f64>()) {
                    (Ok(u), Ok(v)) => assert!((u - v).abs() <= 1e-12, "{name}: {x} vs {y}"),
                    _ => assert_eq!(u, v),
                }
            }
        }
    }
}

#[test]
fn chsh_tsirelson_golden() {
    let out = qframe(&["chsh", "--tsirelson", "--measurement", "eta"]);
    let v = json(&out);
    let max = v["max_variant"].as_f64().unwrap();
    assert!((max - 2.8284271).abs() <= 1e-7);
    assert_eq!(v["is_local"], Value::Bool(false));
    assert_eq!(v["witness"]["variant"], "E11 + E12 + E21 - E22");

    let b = eta_behavior(&tsirelson_settings()).unwrap();
    let lib = chsh_value(&b).unwrap();
    assert_eq!(max, lib.max_variant);
    assert_eq!(v["canonical"].as_f64().unwrap(), lib.canonical);
    let e: [[f64; 2]; 2] = serde_json::from_value(v["correlators"].clone()).unwrap();
    assert_eq!(e, lib.correlators);
    assert!(!lhv_membership(&b).unwrap().is_local);
    check_golden("chsh_tsirelson.json", &stdout(&out));
}

#[test]
fn measure_eta_golden() {
    let out = qframe(&["measure", "--process", "eta", "--axis", "0,0,1", "--state", r#"{"bloch":[0,0,1]}"#]);
    let v = json(&out);
    let probs: Vec<f64> = serde_json::from_value(v["distribution"]["probs"].clone()).unwrap();
    assert!((probs[0] - 1.0).abs() <= 1e-12 && probs[1].abs() <= 1e-12);
    let total = v["negativity"]["total_negative_mass"].as_f64().unwrap();
    assert!((total - 1.46410).abs() <= 1e-5);
    assert_eq!(total, negativity(&eta_measurement(&MeasurementAxis::z())).total_negative_mass);
    check_golden("measure_eta_z.json", &stdout(&out));
}

#[test]
fn fine_tsirelson_golden() {
    let out = qframe(&["fine", "--tsirelson"]);
    let v = json(&out);
    assert!(v["min_entry"].as_f64().unwrap() >= -1e-12);
    assert!(v["max_marginal_residual"].as_f64().unwrap() <= 1e-12);
    let s = tsirelson_settings();
    let report = fine_joint_readout(&s).unwrap().report(&s);
    assert_eq!(v["min_entry"].as_f64().unwrap(), report.min_entry);
    check_golden("fine_tsirelson.json", &stdout(&out));
}

#[test]
fn state_golden() {
    let out = qframe(&["state", "--state", r#"{"bloch":[1,0,0]}"#]);
    let v = json(&out);
    assert_eq!(v["quantum"], Value::Bool(true));
    check_golden("state_bloch_x.json", &stdout(&out));

    let singlet_params = r#"{"sA":[0,0,0],"sB":[0,0,0],"T":[[-1,0,0],[0,-1,0],[0,0,-1]]}"#;
    let v = json(&qframe(&["state", "--state", singlet_params]));
    let probs: Vec<f64> = serde_json::from_value(v["probs"].clone()).unwrap();
    assert!(common::max_diff(&probs, singlet().probs()) <= 1e-15);

    let v = json(&qframe(&["state", "--state", r#"{"sA":[0,0,0],"sB":[0,0,0],"T":[[1,0,0],[0,1,0],[0,0,1]]}"#]));
    assert_eq!(v["quantum"], Value::Bool(false));
    assert!((v["density_report"]["min_eigenvalue"].as_f64().unwrap() + 0.5).abs() <= 1e-10);
}

#[test]
fn evolve_golden() {
    let process = r#"{"kind":"rotation","params":{"axis":[0,0,1],"angle":1.5707963267948966}}"#;
    let out = qframe(&["evolve", "--process", process, "--state", r#"{"bloch":[1,0,0]}"#]);
    let v = json(&out);
    let s: Vec<f64> = serde_json::from_value(v["state"]["bloch"].clone()).unwrap();
    assert!(common::max_diff(&s, &[0.0, 1.0, 0.0]) <= 1e-12);
    check_golden("evolve_rotation.json", &stdout(&out));
}

#[test]
fn sample_singlet_golden() {
    let dist = serde_json::to_string(&serde_json::json!({ "probs": singlet().probs().to_vec() })).unwrap();
    let out = qframe(&["sample", "--distribution", &dist, "--samples", "100000", "--seed", "5"]);
    let v = json(&out);
    assert_eq!(v["matching_pairs"], 0);
    let counts: Vec<u64> = serde_json::from_value(v["counts"].clone()).unwrap();
    assert_eq!(counts, sample_outcomes(singlet().probs(), 100_000, 5).unwrap());
    check_golden("sample_singlet.json", &stdout(&out));
}

#[test]
fn sweep_csv_golden() {
    let out = qframe(&["--format", "csv", "chsh", "--tsirelson", "--sweep", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), qframe::bell::SWEEP_CSV_HEADER);
    assert_eq!(text.lines().count(), 17);
    check_golden("chsh_sweep_4.csv", &text);

    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let csv = dir.join("sweep8.csv");
    let v = json(&qframe(&["chsh", "--tsirelson", "--sweep", "8", "--csv", csv.to_str().unwrap()]));
    assert!((v["sweep"]["max_value"].as_f64().unwrap() - 2.0 * 2f64.sqrt()).abs() <= 1e-12);
    assert_eq!(std::fs::read_to_string(csv).unwrap().lines().count(), 65);
}

#[test]
fn output_is_byte_identical_per_seed() {
    let args = ["chsh", "--random", "--samples", "2000", "--seed", "9"];
    assert_eq!(qframe(&args).stdout, qframe(&args).stdout);
    let args = ["sample", "--tsirelson", "--samples", "5000"];
    assert_eq!(qframe(&args).stdout, qframe(&args).stdout);
}

#[test]
fn seed_env_overrides_default() {
    let dist = "[0.25,0.25,0.25,0.25]";
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(common::qframe_bin());
        cmd.args(["sample", "--distribution", dist, "--samples", "1000"]).args(extra);
        cmd.env_remove(qframe::SEED_ENV);
        if let Some(seed) = env {
            cmd.env(qframe::SEED_ENV, seed);
        }
        json(&cmd.output().unwrap())
    };
    let default = run(None, &[]);
    assert_eq!(default["seed"], qframe::DEFAULT_SEED);
    let from_env = run(Some("123"), &[]);
    assert_eq!(from_env["seed"], 123);
    assert_ne!(default["counts"], from_env["counts"]);
    assert_eq!(run(Some("123"), &["--seed", "7"])["seed"], 7);
}

#[test]
fn exit_codes() {
    assert_eq!(qframe(&["state", "--state", r#"{"bloch":[0,0,2]}"#]).status.code(), Some(1));
    assert_eq!(qframe(&["sample", "--distribution", "[1.366,-0.366]", "--samples", "10"]).status.code(), Some(1));
    assert_eq!(qframe(&["nonsense"]).status.code(), Some(2));
    assert_eq!(qframe(&["fine"]).status.code(), Some(2));
    assert_eq!(qframe(&["state", "--state", "/no/such/file.json"]).status.code(), Some(2));
    let err = qframe(&["evolve", "--process", r#"{"kind":"eta","params":{"axis":[0,0,3]}}"#, "--state", r#"{"bloch":[0,0,1]}"#]);
    assert_eq!(err.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&err.stderr).contains("NotUnitAxis"));
}

#[test]
fn files_work_as_inputs_and_outputs() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let settings = dir.join("tsirelson_settings.json");
    let doc = qframe::io::SettingsDoc::from(&tsirelson_settings());
    std::fs::write(&settings, serde_json::to_string(&doc).unwrap()).unwrap();
    let report = dir.join("chsh_report.json");
    let out = qframe(&["chsh", "--settings", settings.to_str().unwrap(), "--output", report.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["is_local"], Value::Bool(false));
}

#[test]
fn readout_chsh_is_local() {
    let v = json(&qframe(&["chsh", "--tsirelson", "--measurement", "readout"]));
    assert_eq!(v["is_local"], Value::Bool(true));
    assert_eq!(v["fine"]["holds"], Value::Bool(true));
    for bit in ["first", "second", "product"] {
        assert!(v["bits"][bit]["max_variant"].as_f64().unwrap() <= 2.0 + 1e-9);
    }
}

#[test]
fn oracle_check_passes() {
    let v = json(&qframe(&["oracle-check", "--cases", "100"]));
    assert_eq!(v["passed"], Value::Bool(true));
    assert!(v["max_residual"].as_f64().unwrap() <= 1e-10);
}
