use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use maxcurve_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { mc_string_free(s) };
    out
}

fn last_error() -> String {
    let p = mc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn field_round_trip() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { mc_field_new(2, 4, &mut f) }, McStatus::Ok);
    assert_eq!(unsafe { mc_field_size(f) }, 16);
    let mut r = 0u64;
    for a in 1..16 {
        assert_eq!(unsafe { mc_field_op(f, McOp::Div, 1, a, &mut r) }, McStatus::Ok);
        let inv = r;
        assert_eq!(unsafe { mc_field_op(f, McOp::Mul, a, inv, &mut r) }, McStatus::Ok);
        assert_eq!(r, 1);
        assert_eq!(unsafe { mc_field_pow(f, a, 15, &mut r) }, McStatus::Ok);
        assert_eq!(r, 1);
        assert_eq!(unsafe { mc_field_order(f, a, &mut r) }, McStatus::Ok);
        assert_eq!(15 % r, 0);
    }
    assert_eq!(unsafe { mc_field_op(f, McOp::Div, 3, 0, &mut r) }, McStatus::InvalidArgument);
    assert!(last_error().contains("zero"));
    assert_eq!(unsafe { mc_field_op(f, McOp::Add, 16, 1, &mut r) }, McStatus::InvalidArgument);
    assert_eq!(unsafe { mc_field_order(f, 0, &mut r) }, McStatus::InvalidArgument);
    unsafe { mc_field_free(f) };
}

#[test]
fn bad_field_and_nulls() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { mc_field_new(6, 1, &mut f) }, McStatus::FieldError);
    assert!(f.is_null());
    assert_eq!(unsafe { mc_field_new(2, 3, ptr::null_mut()) }, McStatus::NullPointer);
    let mut r = 0;
    assert_eq!(unsafe { mc_field_op(ptr::null(), McOp::Add, 0, 0, &mut r) }, McStatus::NullPointer);
    assert_eq!(unsafe { mc_field_size(ptr::null()) }, 0);
    unsafe {
        mc_field_free(ptr::null_mut());
        mc_params_free(ptr::null_mut());
        mc_string_free(ptr::null_mut());
    }
}

#[test]
fn curve_counts() {
    let mut n = 0;
    for (q, want) in [(2, 9), (3, 28), (4, 65)] {
        assert_eq!(unsafe { mc_curve_count(McCurve::Fermat, q, 0, &mut n) }, McStatus::Ok);
        assert_eq!(n, want);
        assert_eq!(unsafe { mc_curve_count(McCurve::NormTrace, q, 0, &mut n) }, McStatus::Ok);
        assert_eq!(n, want);
    }
    assert_eq!(unsafe { mc_curve_count(McCurve::Gs, 2, 0, &mut n) }, McStatus::Ok);
    assert_eq!(n, 113);
    assert_eq!(unsafe { mc_curve_count(McCurve::Gk, 2, 4, &mut n) }, McStatus::InvalidArgument);
}

#[test]
fn run_check_reports_json() {
    let params = mc_params_new();
    let key = CString::new("q").unwrap();
    assert_eq!(unsafe { mc_params_set(params, key.as_ptr(), 8) }, McStatus::Ok);
    let name = CString::new("delta-ledger").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { mc_run_check(name.as_ptr(), params, &mut out) }, McStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["name"], "delta-ledger");
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["params"]["q"], 8);
    unsafe { mc_params_free(params) };
}

#[test]
fn run_check_errors() {
    let mut out = ptr::null_mut();
    let name = CString::new("no-such-check").unwrap();
    assert_eq!(unsafe { mc_run_check(name.as_ptr(), ptr::null(), &mut out) }, McStatus::UnknownCheck);
    assert!(out.is_null());
    assert!(last_error().contains("no-such-check"));

    let params = mc_params_new();
    let key = CString::new("bogus").unwrap();
    unsafe { mc_params_set(params, key.as_ptr(), 1) };
    let name = CString::new("lemmino").unwrap();
    assert_eq!(unsafe { mc_run_check(name.as_ptr(), params, &mut out) }, McStatus::InvalidArgument);
    unsafe { mc_params_free(params) };

    assert_eq!(unsafe { mc_run_check(ptr::null(), ptr::null(), &mut out) }, McStatus::NullPointer);
}

#[test]
fn run_all_filtered() {
    let filter = CString::new("delta").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { mc_run_all(filter.as_ptr(), &mut out) }, McStatus::Ok);
    let text = take(out);
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|v| v["verdict"] == "pass"));
}

#[test]
fn names_and_version() {
    let names = take(mc_check_names());
    assert!(names.lines().any(|n| n == "primovalore"));
    let v = unsafe { CStr::from_ptr(mc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_is_valid_c() {
    let header = manifest_dir().join("include/maxcurve.h");
    assert!(header.exists());
    let src = std::env::temp_dir().join(format!("maxcurve_hdr_{}.c", std::process::id()));
    std::fs::write(&src, "#include \"maxcurve.h\"\nint main(void) { return MC_STATUS_OK; }\n").unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header.parent().unwrap())
        .arg(&src)
        .status();
    let _ = std::fs::remove_file(&src);
    match status {
        Ok(s) => assert!(s.success(), "cc rejected maxcurve.h"),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => eprintln!("cc not found, header not compiled"),
        Err(e) => panic!("{e}"),
    }
}
