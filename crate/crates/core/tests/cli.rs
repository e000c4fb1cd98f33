use std::io::Write;
use std::process::{Command, Output, Stdio};

use qhchain::hamiltonian::descriptor::{load_model, to_canonical_json};
use serde_json::Value;

fn qhchain(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qhchain"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: Option<&str>) -> String {
    let out = qhchain(args, stdin);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str], stdin: Option<&str>) -> Value {
    serde_json::from_str(&ok(args, stdin)).unwrap()
}

fn code(args: &[&str], stdin: Option<&str>) -> i32 {
    qhchain(args, stdin).status.code().unwrap()
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(
        code(&["generate", "biased-pbc-corrected", "--n", "4", "--delta", "1"], None),
        2
    );
    assert_eq!(code(&["spectrum", "/no/such/model.json"], None), 2);
    assert_eq!(code(&["frobnicate"], None), 2);
    assert_eq!(code(&["spectrum", "-"], Some("{ not json")), 2);
    assert_eq!(code(&["--help"], None), 0);
}

#[test]
fn symbolic_model_without_param_is_a_usage_error() {
    let model = ok(&["generate", "biased-obc", "--n", "3"], None);
    let out = qhchain(&["spectrum", "-"], Some(&model));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--param"));
}

#[test]
fn generated_models_round_trip() {
    let cases: [&[&str]; 5] = [
        &["generate", "biased-obc", "--n", "4"],
        &["generate", "biased-pbc-naive", "--n", "4", "--delta", "1/3"],
        &["generate", "biased-pbc-corrected", "--n", "4"],
        &["generate", "defect", "--n", "5", "--t", "1", "--bond", "2"],
        &["generate", "defect", "--n", "4", "--t", "1,2,1", "--gamma", "1/2"],
    ];
    for args in cases {
        let text = ok(args, None);
        let model = load_model(&text).unwrap();
        assert_eq!(to_canonical_json(&model).trim_end(), text.trim_end(), "{args:?}");
        let a = json(&["gauge", "-", "--param", "1/3"], Some(&text));
        let b = json(&["gauge", "-", "--param", "1/3"], Some(&text));
        assert_eq!(a["meta"]["model_hash"], b["meta"]["model_hash"]);
    }
}

#[test]
fn ring_at_zero_has_integer_spectrum() {
    let model = ok(&["generate", "biased-pbc-corrected", "--n", "4", "--delta", "0"], None);
    let doc = json(&["spectrum", "-"], Some(&model));
    let exact: Vec<(&str, u64)> = doc["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["exact"].as_str().unwrap(), c["algebraic"].as_u64().unwrap()))
        .collect();
    assert_eq!(exact, [("-2", 1), ("0", 2), ("2", 1)]);
    assert_eq!(doc["real"], true);
}

#[test]
fn csv_output_starts_with_metadata_line() {
    let model = ok(&["generate", "biased-pbc-corrected", "--n", "4", "--delta", "0"], None);
    let text = ok(&["--format", "csv", "spectrum", "-"], Some(&model));
    let (meta, body) = text.split_once('\n').unwrap();
    assert!(meta.starts_with("# model_hash="), "{meta}");
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[0], "re");
    assert_eq!(reader.records().count(), 3);
}

#[test]
fn sweep_drops_poles_with_a_warning() {
    let model = ok(&["generate", "biased-pbc-corrected", "--n", "4"], None);
    let out = qhchain(&["--format", "csv", "sweep", "-", "--range", "0:1:5"], Some(&model));
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("pole"));
    let text = String::from_utf8(out.stdout).unwrap();
    // metadata, header, four surviving points
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().nth(1).unwrap().starts_with("delta,re_1,im_1"));
}

#[test]
fn sweep_is_reproducible() {
    let model = ok(&["generate", "biased-obc", "--n", "5"], None);
    let a = ok(
        &["--format", "csv", "sweep", "-", "--range", "-0.9:0.9:37"],
        Some(&model),
    );
    let b = ok(
        &["--format", "csv", "sweep", "-", "--range", "-0.9:0.9:37"],
        Some(&model),
    );
    assert_eq!(a, b);
}

#[test]
fn open_chain_eps_sit_at_unit_delta() {
    let model = ok(&["generate", "biased-obc", "--n", "4"], None);
    let doc = json(&["ep", "-"], Some(&model));
    let eps: Vec<(String, u64)> = doc["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["is_ep"] == true)
        .map(|c| (c["location"].as_str().unwrap().to_owned(), c["order"].as_u64().unwrap()))
        .collect();
    assert_eq!(eps, [("-1".to_owned(), 4), ("1".to_owned(), 4)]);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("qhchain-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    ok(&["--out", p, "generate", "biased-obc", "--n", "3"], None);
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let v: Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["n"], 3);
}

#[test]
fn two_level_metric() {
    let doc = json(&["metric2x2", "--gamma", "0.5"], None);
    assert_eq!(doc["positive_definite"], true);
    let eig: Vec<f64> = doc["metric_eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert!((eig[0] - 0.5).abs() < 1e-12 && (eig[1] - 1.5).abs() < 1e-12, "{eig:?}");
    assert!(doc["hermiticity_residual"].as_f64().unwrap() < 1e-12);
}
