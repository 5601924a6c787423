//! Exercises the C entry points the way a foreign caller would:
//! through raw pointers, checking statuses, and freeing what was
//! allocated.

use std::ffi::{CStr, CString};
use std::ptr;

use freiheit_ffi::{
    freiheit_last_error, freiheit_report_exit_code, freiheit_report_free, freiheit_report_json,
    freiheit_run_job, freiheit_version, FreiheitOptions, FreiheitReport, FreiheitStatus,
};

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(freiheit_last_error())
            .to_string_lossy()
            .into_owned()
    }
}

fn run(command: &str, payload: &str, options: Option<&FreiheitOptions>) -> (FreiheitStatus, *mut FreiheitReport) {
    let command = CString::new(command).unwrap();
    let payload = CString::new(payload).unwrap();
    let mut report: *mut FreiheitReport = ptr::null_mut();
    let status = unsafe {
        freiheit_run_job(
            command.as_ptr(),
            payload.as_ptr(),
            options.map_or(ptr::null(), |o| o as *const _),
            &mut report,
        )
    };
    (status, report)
}

#[test]
fn chibar_round_trip() {
    let (status, report) = run("chibar", r#"{ "group": { "type": "free", "rank": 3 } }"#, None);
    assert_eq!(status, FreiheitStatus::Positive);
    assert!(!report.is_null());

    let json = unsafe { CStr::from_ptr(freiheit_report_json(report)) };
    let doc: serde_json::Value = serde_json::from_str(json.to_str().unwrap()).unwrap();
    assert_eq!(doc["result"]["chibar"], 2);
    assert_eq!(unsafe { freiheit_report_exit_code(report) }, 0);

    unsafe { freiheit_report_free(report) };
}

#[test]
fn negative_verdicts_still_return_reports() {
    // Two tiny translations: obstructed, exit code 2.
    let payload = r#"{
        "matrices": [
            { "a": [1.0, 0.0], "b": [0.01, 0.0], "c": [0.0, 0.0], "d": [1.0, 0.0] },
            { "a": [1.0, 0.0], "b": [0.0, 0.01], "c": [0.0, 0.0], "d": [1.0, 0.0] }
        ],
        "restarts": 4,
        "max_iters": 60
    }"#;
    let (status, report) = run("obstruct", payload, None);
    assert_eq!(status, FreiheitStatus::Negative);
    assert_eq!(unsafe { freiheit_report_exit_code(report) }, 2);
    unsafe { freiheit_report_free(report) };
}

#[test]
fn options_are_honored() {
    let options = FreiheitOptions {
        seed: 7,
        has_seed: true,
        ..Default::default()
    };
    let payload = r#"{ "words": ["a", "b"], "ambient_rank": 2 }"#;
    let (status, report) = run("iof", payload, Some(&options));
    assert_eq!(status, FreiheitStatus::Positive);
    unsafe { freiheit_report_free(report) };
}

#[test]
fn null_and_malformed_arguments_are_reported() {
    let mut report: *mut FreiheitReport = ptr::null_mut();
    let payload = CString::new("{}").unwrap();
    let status =
        unsafe { freiheit_run_job(ptr::null(), payload.as_ptr(), ptr::null(), &mut report) };
    assert_eq!(status, FreiheitStatus::NullArgument);
    assert!(report.is_null());
    assert!(last_error().contains("command"));

    let (status, report) = run("iof", "{ not json", None);
    assert_eq!(status, FreiheitStatus::Error);
    assert!(report.is_null());
    assert!(last_error().contains("JSON"));

    let (status, _) = run("no-such-command", "{}", None);
    assert_eq!(status, FreiheitStatus::Error);
    assert!(last_error().contains("no-such-command"));

    let bad_payload = r#"{ "group": { "type": "free", "rank": 0 } }"#;
    let (status, report) = run("chibar", bad_payload, None);
    assert_eq!(status, FreiheitStatus::Error);
    assert!(report.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn null_report_accessors_are_safe() {
    unsafe {
        assert!(freiheit_report_json(ptr::null()).is_null());
        assert_eq!(freiheit_report_exit_code(ptr::null()), -1);
        freiheit_report_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_the_crate() {
    let version = unsafe { CStr::from_ptr(freiheit_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
