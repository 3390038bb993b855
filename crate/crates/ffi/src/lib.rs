//! C ABI over the `maxcurve` library.
//!
//! Every fallible function returns an [`McStatus`]; on failure the message is
//! available from [`mc_last_error`] on the same thread. Strings returned by the
//! library must be released with [`mc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use maxcurve::curves::CurveModel;
use maxcurve::gf::{build_field, Fe, FieldCtx};
use maxcurve::verifier::{self, Params, Verdict, VerifyError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownCheck = 3,
    Unsupported = 4,
    CheckFailed = 5,
    FieldError = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McCurve {
    /// `X^{q+1} + Y^{q+1} + T^{q+1} = 0`, parameter `a = q`.
    Fermat = 0,
    /// `Y^{q+1} = X^q T + X T^q`, parameter `a = q`.
    NormTrace = 1,
    /// `C_{l^n}`, parameters `a = l`, `b = n`.
    Gk = 2,
    /// `Y^{l^2-l+1} = X^{l^2} - X`, parameter `a = l`.
    Gs = 3,
}

/// Opaque finite field handle.
pub struct McField {
    inner: Arc<FieldCtx>,
}

/// Opaque parameter map for checks.
pub struct McParams {
    inner: Params,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn fail(status: McStatus, msg: impl Into<String>) -> McStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> McStatus) -> McStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(McStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, McStatus> {
    if s.is_null() {
        return Err(fail(McStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(McStatus::InvalidArgument, "string is not UTF-8"))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread, or NULL. Owned by the library;
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------- fields

/// Creates `F_{p^k}`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn mc_field_new(p: u64, k: u32, out: *mut *mut McField) -> McStatus {
    guard(|| {
        if out.is_null() {
            return fail(McStatus::NullPointer, "out is null");
        }
        match build_field(p, k) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(McField { inner: f }));
                McStatus::Ok
            }
            Err(e) => fail(McStatus::FieldError, e.to_string()),
        }
    })
}

/// # Safety
/// `field` must be NULL or a handle from [`mc_field_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mc_field_free(field: *mut McField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Number of elements, or 0 for a NULL handle.
///
/// # Safety
/// `field` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mc_field_size(field: *const McField) -> u64 {
    field.as_ref().map_or(0, |f| f.inner.size())
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McOp {
    Add = 0,
    Sub = 1,
    Mul = 2,
    Div = 3,
}

unsafe fn elem(f: &FieldCtx, v: u64) -> Result<Fe, McStatus> {
    f.elem(v).map_err(|e| fail(McStatus::InvalidArgument, e.to_string()))
}

/// Binary operation on element encodings (base-p numerals of the coefficient vectors).
///
/// # Safety
/// `field` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_field_op(field: *const McField, op: McOp, a: u64, b: u64, out: *mut u64) -> McStatus {
    guard(|| {
        let (Some(f), false) = (field.as_ref(), out.is_null()) else {
            return fail(McStatus::NullPointer, "null argument");
        };
        let f = &f.inner;
        let (a, b) = match (elem(f, a), elem(f, b)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let r = match op {
            McOp::Add => f.add(a, b),
            McOp::Sub => f.sub(a, b),
            McOp::Mul => f.mul(a, b),
            McOp::Div => match f.div(a, b) {
                Some(r) => r,
                None => return fail(McStatus::InvalidArgument, "division by zero"),
            },
        };
        *out = r.value();
        McStatus::Ok
    })
}

/// `a^e`.
///
/// # Safety
/// `field` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_field_pow(field: *const McField, a: u64, e: u64, out: *mut u64) -> McStatus {
    guard(|| {
        let (Some(f), false) = (field.as_ref(), out.is_null()) else {
            return fail(McStatus::NullPointer, "null argument");
        };
        match elem(&f.inner, a) {
            Ok(a) => {
                *out = f.inner.pow(a, e as u128).value();
                McStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Multiplicative order of a nonzero element.
///
/// # Safety
/// `field` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_field_order(field: *const McField, a: u64, out: *mut u64) -> McStatus {
    guard(|| {
        let (Some(f), false) = (field.as_ref(), out.is_null()) else {
            return fail(McStatus::NullPointer, "null argument");
        };
        let a = match elem(&f.inner, a) {
            Ok(a) => a,
            Err(s) => return s,
        };
        match f.inner.order(a) {
            Ok(n) => {
                *out = n;
                McStatus::Ok
            }
            Err(e) => fail(McStatus::InvalidArgument, e.to_string()),
        }
    })
}

// ---------------------------------------------------------------- curves

/// Number of points of a curve over its maximality field.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_curve_count(curve: McCurve, a: u64, b: u32, out: *mut u64) -> McStatus {
    guard(|| {
        if out.is_null() {
            return fail(McStatus::NullPointer, "out is null");
        }
        let model = match curve {
            McCurve::Fermat => CurveModel::fermat(a),
            McCurve::NormTrace => CurveModel::norm_trace(a),
            McCurve::Gk => CurveModel::gk(a, b),
            McCurve::Gs => CurveModel::gs(a),
        };
        let model = match model {
            Ok(m) => m,
            Err(e) => return fail(McStatus::InvalidArgument, e.to_string()),
        };
        match model.count_rational_points() {
            Ok(n) => {
                *out = n;
                McStatus::Ok
            }
            Err(e) => fail(McStatus::Unsupported, e.to_string()),
        }
    })
}

// ---------------------------------------------------------------- checks

#[no_mangle]
pub extern "C" fn mc_params_new() -> *mut McParams {
    Box::into_raw(Box::new(McParams { inner: Params::new() }))
}

/// # Safety
/// `params` must be a live handle and `key` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mc_params_set(params: *mut McParams, key: *const c_char, value: u64) -> McStatus {
    guard(|| {
        let Some(p) = params.as_mut() else {
            return fail(McStatus::NullPointer, "params is null");
        };
        match read_str(key) {
            Ok(k) => {
                p.inner.insert(k.to_string(), value);
                McStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// # Safety
/// `params` must be NULL or a handle from [`mc_params_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mc_params_free(params: *mut McParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Runs one check and writes its JSON report to `out_json`.
///
/// Returns `Ok` on pass, `CheckFailed` on fail and `Unsupported` when the
/// parameters are outside the supported range; the report is written in all
/// three cases.
///
/// # Safety
/// `name` must be a NUL-terminated string, `params` NULL or a live handle, and
/// `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_run_check(name: *const c_char, params: *const McParams, out_json: *mut *mut c_char) -> McStatus {
    guard(|| {
        if out_json.is_null() {
            return fail(McStatus::NullPointer, "out_json is null");
        }
        *out_json = ptr::null_mut();
        let name = match read_str(name) {
            Ok(n) => n,
            Err(s) => return s,
        };
        let empty = Params::new();
        let p = params.as_ref().map_or(&empty, |p| &p.inner);
        match verifier::run_check(name, p) {
            Ok(report) => {
                *out_json = to_c(report.to_json_line());
                match report.verdict {
                    Verdict::Pass => McStatus::Ok,
                    Verdict::Fail => fail(McStatus::CheckFailed, format!("{name}: {}", report.mismatches().join(","))),
                    Verdict::Unsupported => fail(McStatus::Unsupported, report.note.unwrap_or_default()),
                }
            }
            Err(e @ VerifyError::UnknownCheck(_)) => fail(McStatus::UnknownCheck, e.to_string()),
            Err(e) => fail(McStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Runs every registered parameter set whose name starts with `filter` (NULL for
/// all) and writes one JSON report per line to `out_json`.
///
/// # Safety
/// `filter` must be NULL or a NUL-terminated string; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mc_run_all(filter: *const c_char, out_json: *mut *mut c_char) -> McStatus {
    guard(|| {
        if out_json.is_null() {
            return fail(McStatus::NullPointer, "out_json is null");
        }
        *out_json = ptr::null_mut();
        let filter = if filter.is_null() {
            None
        } else {
            match read_str(filter) {
                Ok(f) => Some(f),
                Err(s) => return s,
            }
        };
        let (reports, summary) = verifier::run_all(filter, false);
        let text: String = reports.iter().map(|r| r.to_json_line() + "\n").collect();
        *out_json = to_c(text);
        if summary.all_pass() {
            McStatus::Ok
        } else {
            fail(
                McStatus::CheckFailed,
                format!("{} failed, {} unsupported", summary.failed, summary.unsupported),
            )
        }
    })
}

/// Newline-separated names of the registered checks.
#[no_mangle]
pub extern "C" fn mc_check_names() -> *mut c_char {
    to_c(verifier::names().join("\n"))
}
