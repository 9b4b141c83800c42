/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef POLYDOUBLE_H
#define POLYDOUBLE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Evaluation methods for [`pd_psi2`].
 */
typedef enum PdMethod {
  PD_METHOD_AUTO = 0,
  PD_METHOD_SERIES = 1,
  PD_METHOD_POLYGAMMA_RELATION = 2,
  PD_METHOD_ZETA_CLOSED_FORM = 3,
  PD_METHOD_INTEGRAL = 4,
  PD_METHOD_ASYMPTOTIC = 5,
} PdMethod;

/**
 * Result codes.
 */
typedef enum PdStatus {
  PD_STATUS_OK = 0,
  PD_STATUS_DOMAIN_ERROR = 1,
  PD_STATUS_RANGE_ERROR = 2,
  PD_STATUS_NO_CONVERGENCE = 3,
  PD_STATUS_INVALID_ARGUMENT = 4,
  PD_STATUS_NULL_POINTER = 5,
  PD_STATUS_INTERNAL = 6,
} PdStatus;

/**
 * Opaque evaluation settings.
 */
typedef struct PdPrecision PdPrecision;

/**
 * Opaque list of check reports.
 */
typedef struct PdReport PdReport;

/**
 * A value as an unevaluated double-double sum `hi + lo` with an absolute
 * error estimate.
 */
typedef struct PdValue {
  double hi;
  double lo;
  double error;
} PdValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates settings; `abs_tol` > 0, `max_terms` >= 16, `shift_threshold` >= 8.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PdStatus pd_precision_new(double abs_tol,
                               size_t max_terms,
                               double shift_threshold,
                               struct PdPrecision **out);

/**
 * # Safety
 * `p` must come from [`pd_precision_new`] or be null.
 */
void pd_precision_free(struct PdPrecision *p);

/**
 * ψ₂⁽ⁿ⁾(x); `method` is a [`PdMethod`] value. A null `prec` selects the
 * defaults.
 *
 * # Safety
 * `out` must be valid; `prec` null or from [`pd_precision_new`].
 */
enum PdStatus pd_psi2(uint32_t n,
                      double x,
                      int32_t method,
                      const struct PdPrecision *prec,
                      struct PdValue *out);

/**
 * The di-double gamma ψ₂(x).
 *
 * # Safety
 * As for [`pd_psi2`].
 */
enum PdStatus pd_psi2_didouble(double x, const struct PdPrecision *prec, struct PdValue *out);

/**
 * ψ⁽ⁿ⁾(x).
 *
 * # Safety
 * As for [`pd_psi2`].
 */
enum PdStatus pd_polygamma(uint32_t n,
                           double x,
                           const struct PdPrecision *prec,
                           struct PdValue *out);

/**
 * ζ(s, a).
 *
 * # Safety
 * As for [`pd_psi2`].
 */
enum PdStatus pd_hurwitz_zeta(uint32_t s,
                              double a,
                              const struct PdPrecision *prec,
                              struct PdValue *out);

/**
 * log Γ(x).
 *
 * # Safety
 * `out` must be valid.
 */
enum PdStatus pd_log_gamma(double x, struct PdValue *out);

/**
 * log G(x) for Barnes G.
 *
 * # Safety
 * As for [`pd_psi2`].
 */
enum PdStatus pd_log_barnes_g(double x, const struct PdPrecision *prec, struct PdValue *out);

/**
 * Runs one check described by a JSON object such as
 * `{"id":"turan","n":2,"grid":{"lo":0.05,"hi":50,"count":200,"spacing":"logarithmic"}}`.
 *
 * # Safety
 * `request_json` must be a NUL-terminated string; `out` valid.
 */
enum PdStatus pd_check_run(const char *request_json,
                           const struct PdPrecision *prec,
                           struct PdReport **out);

/**
 * Runs the default suite.
 *
 * # Safety
 * `out` must be valid; `prec` null or from [`pd_precision_new`].
 */
enum PdStatus pd_suite_run(uint64_t seed, const struct PdPrecision *prec, struct PdReport **out);

/**
 * 1 if every report in the handle passed, 0 otherwise (also for null).
 *
 * # Safety
 * `r` must be null or a live handle.
 */
int32_t pd_report_passed(const struct PdReport *r);

/**
 * Number of reports in the handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
size_t pd_report_count(const struct PdReport *r);

/**
 * JSON rendering: one object for a single check, an array for a suite.
 * Free the string with [`pd_string_free`].
 *
 * # Safety
 * `r` must be a live handle and `out` valid.
 */
enum PdStatus pd_report_json(const struct PdReport *r, char **out);

/**
 * # Safety
 * `r` must be null or a handle not yet freed.
 */
void pd_report_free(struct PdReport *r);

/**
 * Identity audit as a JSON array. Free the string with [`pd_string_free`].
 *
 * # Safety
 * `out` must be valid; `prec` null or from [`pd_precision_new`].
 */
enum PdStatus pd_audit_run(const struct PdPrecision *prec, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void pd_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next call into the library on the same thread.
 */
const char *pd_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYDOUBLE_H */
