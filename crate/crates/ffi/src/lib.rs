//! C ABI over `polydouble`.
//!
//! Every function returns a [`PdStatus`]; on failure the message is kept
//! per thread and read with [`pd_last_error_message`]. Strings handed out
//! by the library are released with [`pd_string_free`], handles with their
//! own `_free` function. Panics are caught at the boundary and reported as
//! [`PdStatus::Internal`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use polydouble::polydg::{log_barnes_g, psi2_didouble, psi2_eval, PolyDoubleArg};
use polydouble::specfun::{hurwitz_zeta, log_gamma, polygamma, Precision};
use polydouble::verify::{audit_identities, run_check, run_suite, CheckReport, CheckRequest};
use polydouble::{Error, EvalResult, Method};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdStatus {
    Ok = 0,
    DomainError = 1,
    RangeError = 2,
    NoConvergence = 3,
    InvalidArgument = 4,
    NullPointer = 5,
    Internal = 6,
}

/// Evaluation methods for [`pd_psi2`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdMethod {
    Auto = 0,
    Series = 1,
    PolygammaRelation = 2,
    ZetaClosedForm = 3,
    Integral = 4,
    Asymptotic = 5,
}

/// A value as an unevaluated double-double sum `hi + lo` with an absolute
/// error estimate.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PdValue {
    pub hi: f64,
    pub lo: f64,
    pub error: f64,
}

/// Opaque evaluation settings.
pub struct PdPrecision {
    inner: Precision,
}

/// Opaque list of check reports.
pub struct PdReport {
    reports: Vec<CheckReport>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> PdStatus {
    match e {
        Error::Domain(_) => PdStatus::DomainError,
        Error::Range { .. } => PdStatus::RangeError,
        Error::Convergence { .. } => PdStatus::NoConvergence,
        Error::InvalidParameter(_) => PdStatus::InvalidArgument,
    }
}

fn fail(status: PdStatus, msg: &str) -> PdStatus {
    set_error(msg);
    status
}

// Runs `f` with panics converted to `Internal`.
fn guard<F: FnOnce() -> PdStatus>(f: F) -> PdStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            fail(PdStatus::Internal, &format!("internal error: {msg}"))
        }
    }
}

unsafe fn precision(p: *const PdPrecision) -> Precision {
    if p.is_null() {
        Precision::default()
    } else {
        (*p).inner
    }
}

unsafe fn store(out: *mut PdValue, r: polydouble::Result<EvalResult>) -> PdStatus {
    match r {
        Ok(v) => {
            *out = PdValue {
                hi: v.value.hi(),
                lo: v.value.lo(),
                error: v.error,
            };
            PdStatus::Ok
        }
        Err(e) => fail(status_of(&e), &e.to_string()),
    }
}

fn to_c_string(s: String, out: *mut *mut c_char) -> PdStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            PdStatus::Ok
        }
        Err(_) => fail(PdStatus::Internal, "output contained a NUL byte"),
    }
}

/// Creates settings; `abs_tol` > 0, `max_terms` >= 16, `shift_threshold` >= 8.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pd_precision_new(
    abs_tol: f64,
    max_terms: usize,
    shift_threshold: f64,
    out: *mut *mut PdPrecision,
) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return fail(PdStatus::NullPointer, "out is null");
        }
        let p = Precision {
            abs_tol,
            max_terms,
            shift_threshold,
        };
        if let Err(e) = p.validate() {
            return fail(status_of(&e), &e.to_string());
        }
        *out = Box::into_raw(Box::new(PdPrecision { inner: p }));
        PdStatus::Ok
    })
}

/// # Safety
/// `p` must come from [`pd_precision_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn pd_precision_free(p: *mut PdPrecision) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// ψ₂⁽ⁿ⁾(x); `method` is a [`PdMethod`] value. A null `prec` selects the
/// defaults.
///
/// # Safety
/// `out` must be valid; `prec` null or from [`pd_precision_new`].
#[no_mangle]
pub unsafe extern "C" fn pd_psi2(
    n: u32,
    x: f64,
    method: i32,
    prec: *const PdPrecision,
    out: *mut PdValue,
) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return fail(PdStatus::NullPointer, "out is null");
        }
        let m = match method {
            x if x == PdMethod::Auto as i32 => Method::Auto,
            x if x == PdMethod::Series as i32 => Method::Series,
            x if x == PdMethod::PolygammaRelation as i32 => Method::PolygammaRelation,
            x if x == PdMethod::ZetaClosedForm as i32 => Method::ZetaClosedForm,
            x if x == PdMethod::Integral as i32 => Method::Integral,
            x if x == PdMethod::Asymptotic as i32 => Method::Asymptotic,
            other => {
                return fail(
                    PdStatus::InvalidArgument,
                    &format!("unknown method code {other}"),
                )
            }
        };
        let p = precision(prec);
        store(
            out,
            PolyDoubleArg::new(n, x).and_then(|a| psi2_eval(a, m, p)),
        )
    })
}

/// The di-double gamma ψ₂(x).
///
/// # Safety
/// As for [`pd_psi2`].
#[no_mangle]
pub unsafe extern "C" fn pd_psi2_didouble(
    x: f64,
    prec: *const PdPrecision,
    out: *mut PdValue,
) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return fail(PdStatus::NullPointer, "out is null");
        }
        store(out, psi2_didouble(x, precision(prec)))
    })
}

/// ψ⁽ⁿ⁾(x).
///
/// # Safety
/// As for [`pd_psi2`].
#[no_mangle]
pub unsafe extern "C" fn pd_polygamma(
    n: u32,
    x: f64,
    prec: *const PdPrecision,
    out: *mut PdValue,
) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return fail(PdStatus::NullPointer, "out is null");
        }
        store(out, polygamma(n, x, precision(prec)))
    })
}

/// ζ(s, a).
///
/// # Safety
/// As for [`pd_psi2`].
#[no_mangle]
pub unsafe extern "C" fn pd_hurwitz_zeta(
    s: u32,
    a: f64,
    prec: *const PdPrecision,
    out: *mut PdValue,
) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return fail(PdStatus::NullPointer, "out is null");
        }
        store(out, hurwitz_zeta(s, a, precision(prec)))
    })
}

/// log Γ(x).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pd_log_gamma(x: f64, out: *mut PdValue) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return fail(PdStatus::NullPointer, "out is null");
        }
        store(out, log_gamma(x))
    })
}

/// log G(x) for Barnes G.
///
/// # Safety
/// As for [`pd_psi2`].
#[no_mangle]
pub unsafe extern "C" fn pd_log_barnes_g(
    x: f64,
    prec: *const PdPrecision,
    out: *mut PdValue,
) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return fail(PdStatus::NullPointer, "out is null");
        }
        store(out, log_barnes_g(x, precision(prec)))
    })
}

/// Runs one check described by a JSON object such as
/// `{"id":"turan","n":2,"grid":{"lo":0.05,"hi":50,"count":200,"spacing":"logarithmic"}}`.
///
/// # Safety
/// `request_json` must be a NUL-terminated string; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pd_check_run(
    request_json: *const c_char,
    prec: *const PdPrecision,
    out: *mut *mut PdReport,
) -> PdStatus {
    guard(|| {
        if request_json.is_null() || out.is_null() {
            return fail(PdStatus::NullPointer, "request or out is null");
        }
        let text = match CStr::from_ptr(request_json).to_str() {
            Ok(t) => t,
            Err(_) => return fail(PdStatus::InvalidArgument, "request is not UTF-8"),
        };
        let req: CheckRequest = match serde_json::from_str(text) {
            Ok(r) => r,
            Err(e) => {
                return fail(
                    PdStatus::InvalidArgument,
                    &format!("bad check request: {e}"),
                )
            }
        };
        match run_check(&req, precision(prec)) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(PdReport { reports: vec![r] }));
                PdStatus::Ok
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// Runs the default suite.
///
/// # Safety
/// `out` must be valid; `prec` null or from [`pd_precision_new`].
#[no_mangle]
pub unsafe extern "C" fn pd_suite_run(
    seed: u64,
    prec: *const PdPrecision,
    out: *mut *mut PdReport,
) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return fail(PdStatus::NullPointer, "out is null");
        }
        match run_suite(seed, precision(prec)) {
            Ok(reports) => {
                *out = Box::into_raw(Box::new(PdReport { reports }));
                PdStatus::Ok
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// 1 if every report in the handle passed, 0 otherwise (also for null).
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pd_report_passed(r: *const PdReport) -> i32 {
    if r.is_null() {
        return 0;
    }
    i32::from((*r).reports.iter().all(|x| x.passed))
}

/// Number of reports in the handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pd_report_count(r: *const PdReport) -> usize {
    if r.is_null() {
        0
    } else {
        (*r).reports.len()
    }
}

/// JSON rendering: one object for a single check, an array for a suite.
/// Free the string with [`pd_string_free`].
///
/// # Safety
/// `r` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pd_report_json(r: *const PdReport, out: *mut *mut c_char) -> PdStatus {
    guard(|| {
        if r.is_null() || out.is_null() {
            return fail(PdStatus::NullPointer, "report or out is null");
        }
        let reports = &(*r).reports;
        let text = if reports.len() == 1 {
            serde_json::to_string(&reports[0])
        } else {
            serde_json::to_string(reports)
        };
        match text {
            Ok(s) => to_c_string(s, out),
            Err(e) => fail(PdStatus::Internal, &e.to_string()),
        }
    })
}

/// # Safety
/// `r` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pd_report_free(r: *mut PdReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Identity audit as a JSON array. Free the string with [`pd_string_free`].
///
/// # Safety
/// `out` must be valid; `prec` null or from [`pd_precision_new`].
#[no_mangle]
pub unsafe extern "C" fn pd_audit_run(prec: *const PdPrecision, out: *mut *mut c_char) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return fail(PdStatus::NullPointer, "out is null");
        }
        match audit_identities(precision(prec)) {
            Ok(entries) => match serde_json::to_string(&entries) {
                Ok(s) => to_c_string(s, out),
                Err(e) => fail(PdStatus::Internal, &e.to_string()),
            },
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn pd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn pd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
