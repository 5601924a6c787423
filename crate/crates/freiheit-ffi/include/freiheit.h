#ifndef FREIHEIT_H
#define FREIHEIT_H

/* Generated by cbindgen from freiheit-ffi; edit the Rust source, not this file. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status of an FFI call. `Positive` and `Negative` mirror the CLI's
// exit codes 0 and 2: both mean the job ran; only the verdict
// differs.
typedef enum FreiheitStatus {
  FREIHEIT_STATUS_POSITIVE = 0,
  FREIHEIT_STATUS_ERROR = 1,
  FREIHEIT_STATUS_NEGATIVE = 2,
  FREIHEIT_STATUS_NULL_ARGUMENT = 3,
  FREIHEIT_STATUS_INVALID_UTF8 = 4,
} FreiheitStatus;

// Opaque result of a job: the report JSON and the exit code.
typedef struct FreiheitReport FreiheitReport;

// Job options; zero-initialize and set the `has_*` flag for each
// field you mean. A null options pointer uses defaults everywhere.
typedef struct FreiheitOptions {
  uint64_t seed;
  bool has_seed;
  double tol;
  bool has_tol;
  uintptr_t depth;
  bool has_depth;
  bool verify;
} FreiheitOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failing call on this thread; empty
// string when nothing failed yet. Valid until the next failing call
// on the same thread.
const char *freiheit_last_error(void);

// Crate version as a static string; never free it.
const char *freiheit_version(void);

// Run a job.
//
// `command` is one of the CLI subcommand names ("certify-magnus",
// "certify-schottky", "obstruct", "iof", "miof-bound", "chibar",
// "theorem-b", "quotient-check"); `payload_json` is the same JSON
// document the CLI reads via `--input`. On `Positive` or `Negative`
// a report is stored in `*out_report` and must be released with
// `freiheit_report_free`. On any other status `*out_report` is null
// and `freiheit_last_error` explains.
//
// # Safety
// `command` and `payload_json` must be NUL-terminated and readable;
// `options` must be null or point to a valid `FreiheitOptions`;
// `out_report` must be writable.
enum FreiheitStatus freiheit_run_job(const char *command,
                                     const char *payload_json,
                                     const struct FreiheitOptions *options,
                                     struct FreiheitReport **out_report);

// The report JSON; owned by the report, valid until it is freed.
// Null in, null out.
//
// # Safety
// `report` must be null or a live pointer from `freiheit_run_job`.
const char *freiheit_report_json(const struct FreiheitReport *report);

// The CLI-convention exit code of the job (0 or 2); -1 for null.
//
// # Safety
// `report` must be null or a live pointer from `freiheit_run_job`.
int freiheit_report_exit_code(const struct FreiheitReport *report);

// Release a report. Null is a no-op; double-free is undefined.
//
// # Safety
// `report` must be null or a live pointer from `freiheit_run_job`,
// not yet freed.
void freiheit_report_free(struct FreiheitReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FREIHEIT_H */
