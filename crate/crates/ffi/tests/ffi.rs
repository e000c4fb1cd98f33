use std::ffi::{c_char, CStr, CString};
use std::ptr;

use qhchain_ffi::*;

const SYMBOLIC_PAIR: &str = r#"{"n": 2, "boundary": "obc", "parameter": "delta",
    "diag": [0, 0], "upper": [{"poly": [1, -1]}], "lower": [{"poly": [1, 1]}]}"#;

const OPEN_THREE: &str = r#"{"n": 3, "boundary": "obc", "diag": [0, 0, 0], "upper": [1, 1], "lower": [1, 1]}"#;

const OPPOSITE_SIGNS: &str = r#"{"n": 2, "boundary": "obc", "diag": [0, 0], "upper": [1], "lower": [-1]}"#;

fn load(json: &str) -> *mut QhModel {
    let text = CString::new(json).unwrap();
    let mut model = ptr::null_mut();
    let status = unsafe { qh_model_from_json(text.as_ptr(), &mut model) };
    assert_eq!(status, QhStatus::Ok, "{}", last_error());
    assert!(!model.is_null());
    model
}

fn last_error() -> String {
    let p = qh_last_error_message();
    if p.is_null() {
        return String::new();
    }
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn take_string(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { qh_string_free(p) };
    s
}

fn spectrum(model: *const QhModel, param: Option<&str>) -> (QhStatus, Vec<(f64, f64)>) {
    let param = param.map(|p| CString::new(p).unwrap());
    let mut re = [0.0; 8];
    let mut im = [0.0; 8];
    let mut len = 0;
    let status = unsafe {
        qh_spectrum(
            model,
            param.as_ref().map_or(ptr::null(), |p| p.as_ptr()),
            re.as_mut_ptr(),
            im.as_mut_ptr(),
            re.len(),
            &mut len,
        )
    };
    (status, (0..len.min(8)).map(|k| (re[k], im[k])).collect())
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(qh_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn open_chain_spectrum() {
    let m = load(OPEN_THREE);
    let mut n = 0;
    assert_eq!(unsafe { qh_model_size(m, &mut n) }, QhStatus::Ok);
    assert_eq!(n, 3);
    assert_eq!(unsafe { qh_model_is_symbolic(m) }, 0);
    let (status, values) = spectrum(m, None);
    assert_eq!(status, QhStatus::Ok);
    let r2 = 2f64.sqrt();
    for (got, want) in values.iter().zip([-r2, 0.0, r2]) {
        assert!((got.0 - want).abs() < 1e-12 && got.1.abs() < 1e-12, "{got:?}");
    }
    unsafe { qh_model_free(m) };
}

#[test]
fn symbolic_model_needs_a_parameter() {
    let m = load(SYMBOLIC_PAIR);
    assert_eq!(unsafe { qh_model_is_symbolic(m) }, 1);
    let (status, _) = spectrum(m, None);
    assert_eq!(status, QhStatus::Usage);
    assert!(last_error().contains("delta"));

    let (status, values) = spectrum(m, Some("1/2"));
    assert_eq!(status, QhStatus::Ok);
    let e = 0.75f64.sqrt();
    assert!((values[0].0 + e).abs() < 1e-12 && (values[1].0 - e).abs() < 1e-12);
    assert!(last_error().is_empty(), "success clears the message");

    let (status, values) = spectrum(m, Some("2"));
    assert_eq!(status, QhStatus::Ok);
    assert!(values
        .iter()
        .all(|v| v.0.abs() < 1e-12 && (v.1.abs() - 3f64.sqrt()).abs() < 1e-12));
    unsafe { qh_model_free(m) };
}

#[test]
fn short_buffer_reports_needed_length() {
    let m = load(OPEN_THREE);
    let mut re = [0.0; 2];
    let mut im = [0.0; 2];
    let mut len = 0;
    let status = unsafe { qh_spectrum(m, ptr::null(), re.as_mut_ptr(), im.as_mut_ptr(), 2, &mut len) };
    assert_eq!(status, QhStatus::BufferTooSmall);
    assert_eq!(len, 3);
    unsafe { qh_model_free(m) };
}

#[test]
fn gauge_verdicts() {
    let cases = [
        (OPEN_THREE, None, QhVerdict::Hermitian),
        (SYMBOLIC_PAIR, Some("1/2"), QhVerdict::QuasiHermitian),
        (OPPOSITE_SIGNS, None, QhVerdict::NotQuasiHermitian),
    ];
    for (json, param, want) in cases {
        let m = load(json);
        let param = param.map(|p| CString::new(p).unwrap());
        let mut verdict = QhVerdict::Hermitian;
        let status =
            unsafe { qh_gauge_verdict(m, param.as_ref().map_or(ptr::null(), |p| p.as_ptr()), 0.0, &mut verdict) };
        assert_eq!(status, QhStatus::Ok, "{}", last_error());
        assert_eq!(verdict, want, "{json}");
        unsafe { qh_model_free(m) };
    }
}

#[test]
fn discriminant_and_eps_as_json() {
    let m = load(SYMBOLIC_PAIR);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { qh_discriminant(m, &mut out) }, QhStatus::Ok);
    let coeffs: Vec<String> = serde_json::from_str(&take_string(out)).unwrap();
    // λ² − (1 − δ²)
    assert_eq!(coeffs, ["4", "0", "-4"]);

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { qh_find_eps_json(m, &mut out) }, QhStatus::Ok);
    let doc: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    let eps: Vec<&str> = doc["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["is_ep"] == true)
        .map(|c| c["location"].as_str().unwrap())
        .collect();
    assert_eq!(eps, ["-1", "1"]);
    unsafe { qh_model_free(m) };
}

#[test]
fn parse_errors_and_nulls() {
    let bad = CString::new(r#"{"n": 2, "boundary": "obc"}"#).unwrap();
    let mut model = ptr::null_mut();
    assert_eq!(unsafe { qh_model_from_json(bad.as_ptr(), &mut model) }, QhStatus::Parse);
    assert!(model.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(
        unsafe { qh_model_from_json(ptr::null(), &mut model) },
        QhStatus::NullPointer
    );
    let mut n = 0;
    assert_eq!(unsafe { qh_model_size(ptr::null(), &mut n) }, QhStatus::NullPointer);
    assert_eq!(unsafe { qh_model_is_symbolic(ptr::null()) }, -1);
    unsafe {
        qh_model_free(ptr::null_mut());
        qh_string_free(ptr::null_mut());
    }
}

#[test]
fn constant_model_has_constant_discriminant() {
    // λ³ − 2λ
    let m = load(OPEN_THREE);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { qh_discriminant(m, &mut out) }, QhStatus::Ok);
    let coeffs: Vec<String> = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(coeffs, ["32"]);
    unsafe { qh_model_free(m) };
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qhchain.h")).unwrap();
    for name in [
        "qh_version",
        "qh_last_error_message",
        "qh_model_from_json",
        "qh_model_free",
        "qh_model_size",
        "qh_model_is_symbolic",
        "qh_spectrum",
        "qh_gauge_verdict",
        "qh_discriminant",
        "qh_find_eps_json",
        "qh_string_free",
        "QH_STATUS_BUFFER_TOO_SMALL",
        "typedef struct qh_model qh_model;",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
