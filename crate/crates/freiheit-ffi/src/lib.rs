//! C ABI over the job runner. One call per job; results come back as
//! an opaque report handle owning the JSON text and the exit code.
//!
//! Conventions: all strings are NUL-terminated UTF-8; pointers
//! returned by `freiheit_report_json` and `freiheit_last_error` stay
//! valid until the owning report is freed (respectively until the
//! next failing call on the same thread); status codes reuse the
//! process exit convention (0 positive verdict, 2 negative verdict)
//! and extend it with argument errors.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use freiheit::jobs::{run, Command, ConfigOverrides};

/// Status of an FFI call. `Positive` and `Negative` mirror the CLI's
/// exit codes 0 and 2: both mean the job ran; only the verdict
/// differs.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreiheitStatus {
    Positive = 0,
    Error = 1,
    Negative = 2,
    NullArgument = 3,
    InvalidUtf8 = 4,
}

/// Job options; zero-initialize and set the `has_*` flag for each
/// field you mean. A null options pointer uses defaults everywhere.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct FreiheitOptions {
    pub seed: u64,
    pub has_seed: bool,
    pub tol: f64,
    pub has_tol: bool,
    pub depth: usize,
    pub has_depth: bool,
    pub verify: bool,
}

/// Opaque result of a job: the report JSON and the exit code.
pub struct FreiheitReport {
    json: CString,
    exit_code: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("NUL bytes stripped");
    });
}

/// Message for the most recent failing call on this thread; empty
/// string when nothing failed yet. Valid until the next failing call
/// on the same thread.
#[no_mangle]
pub extern "C" fn freiheit_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Crate version as a static string; never free it.
#[no_mangle]
pub extern "C" fn freiheit_version() -> *const c_char {
    const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

unsafe fn utf8_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, FreiheitStatus> {
    if ptr.is_null() {
        set_last_error(&format!("{name} is null"));
        return Err(FreiheitStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_last_error(&format!("{name} is not valid UTF-8"));
        FreiheitStatus::InvalidUtf8
    })
}

/// Run a job.
///
/// `command` is one of the CLI subcommand names ("certify-magnus",
/// "certify-schottky", "obstruct", "iof", "miof-bound", "chibar",
/// "theorem-b", "quotient-check"); `payload_json` is the same JSON
/// document the CLI reads via `--input`. On `Positive` or `Negative`
/// a report is stored in `*out_report` and must be released with
/// `freiheit_report_free`. On any other status `*out_report` is null
/// and `freiheit_last_error` explains.
///
/// # Safety
/// `command` and `payload_json` must be NUL-terminated and readable;
/// `options` must be null or point to a valid `FreiheitOptions`;
/// `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn freiheit_run_job(
    command: *const c_char,
    payload_json: *const c_char,
    options: *const FreiheitOptions,
    out_report: *mut *mut FreiheitReport,
) -> FreiheitStatus {
    if out_report.is_null() {
        set_last_error("out_report is null");
        return FreiheitStatus::NullArgument;
    }
    *out_report = ptr::null_mut();

    let command_name = match utf8_arg(command, "command") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let payload_text = match utf8_arg(payload_json, "payload_json") {
        Ok(s) => s,
        Err(status) => return status,
    };

    let Some(cmd) = Command::from_name(command_name) else {
        set_last_error(&format!("unknown command {command_name:?}"));
        return FreiheitStatus::Error;
    };
    let payload: serde_json::Value = match serde_json::from_str(payload_text) {
        Ok(v) => v,
        Err(e) => {
            set_last_error(&format!("payload is not valid JSON: {e}"));
            return FreiheitStatus::Error;
        }
    };
    let overrides = match options.as_ref() {
        None => ConfigOverrides::default(),
        Some(o) => ConfigOverrides {
            seed: o.has_seed.then_some(o.seed),
            tol: o.has_tol.then_some(o.tol),
            depth: o.has_depth.then_some(o.depth),
            verify: o.verify,
        },
    };

    let outcome = match catch_unwind(AssertUnwindSafe(|| run(cmd, &payload, &overrides))) {
        Ok(Ok(outcome)) => outcome,
        Ok(Err(e)) => {
            set_last_error(&e.to_string());
            return FreiheitStatus::Error;
        }
        Err(_) => {
            set_last_error("internal panic; the report is unavailable");
            return FreiheitStatus::Error;
        }
    };

    let text = serde_json::to_string_pretty(&outcome.report).expect("reports serialize");
    let json = CString::new(text).expect("JSON strings contain no NUL");
    *out_report = Box::into_raw(Box::new(FreiheitReport {
        json,
        exit_code: outcome.exit_code,
    }));
    if outcome.exit_code == 0 {
        FreiheitStatus::Positive
    } else {
        FreiheitStatus::Negative
    }
}

/// The report JSON; owned by the report, valid until it is freed.
/// Null in, null out.
///
/// # Safety
/// `report` must be null or a live pointer from `freiheit_run_job`.
#[no_mangle]
pub unsafe extern "C" fn freiheit_report_json(report: *const FreiheitReport) -> *const c_char {
    match report.as_ref() {
        None => ptr::null(),
        Some(r) => r.json.as_ptr(),
    }
}

/// The CLI-convention exit code of the job (0 or 2); -1 for null.
///
/// # Safety
/// `report` must be null or a live pointer from `freiheit_run_job`.
#[no_mangle]
pub unsafe extern "C" fn freiheit_report_exit_code(report: *const FreiheitReport) -> c_int {
    match report.as_ref() {
        None => -1,
        Some(r) => r.exit_code as c_int,
    }
}

/// Release a report. Null is a no-op; double-free is undefined.
///
/// # Safety
/// `report` must be null or a live pointer from `freiheit_run_job`,
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn freiheit_report_free(report: *mut FreiheitReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
