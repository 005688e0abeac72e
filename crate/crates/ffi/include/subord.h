#ifndef SUBORD_H
#define SUBORD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes.
typedef enum SubordStatus {
  SUBORD_STATUS_OK = 0,
  SUBORD_STATUS_NULL_POINTER = 1,
  // A parameter is outside the domain of the requested formula.
  SUBORD_STATUS_DOMAIN = 2,
  SUBORD_STATUS_DEGENERATE = 3,
  SUBORD_STATUS_ZERO_LEADING_COEFFICIENT = 4,
  SUBORD_STATUS_POLE_AT_ORIGIN = 5,
  SUBORD_STATUS_POLE_HIT = 6,
  SUBORD_STATUS_INVALID_MEMBER = 7,
  SUBORD_STATUS_UNKNOWN_RESULT = 8,
  SUBORD_STATUS_INVALID_GRID = 9,
  // A string argument is not valid UTF-8.
  SUBORD_STATUS_INVALID_STRING = 10,
  // Any other library error; see `subord_last_error`.
  SUBORD_STATUS_FAILED = 11,
  // A Rust panic was caught at the boundary.
  SUBORD_STATUS_PANIC = 12,
} SubordStatus;

// Opaque truncated Laurent series.
typedef struct SubordSeries SubordSeries;

// The four thresholds of one theorem variant.
typedef struct SubordThresholds {
  double delta1;
  double delta2;
  double delta3;
  double delta4;
} SubordThresholds;

// Summary of an admissibility scan.
typedef struct SubordScan {
  double max_re;
  double argmax_rho;
  double argmax_sigma;
  uintptr_t skipped;
} SubordScan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread. The pointer stays valid
// until the next failing call on the same thread.
const char *subord_last_error(void);

// Builds a series `sum_k (re[k] + i im[k]) z^(low_exp + k)`, valid to
// `order` terms past `low_exp`. `im` may be null for real coefficients.
//
// # Safety
// `re` (and `im` when non-null) must point to `len` doubles; `out` must be
// writable.
enum SubordStatus subord_series_new(int32_t low_exp,
                                    const double *re,
                                    const double *im,
                                    uintptr_t len,
                                    uintptr_t order,
                                    struct SubordSeries **out);

// Releases a series handle. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void subord_series_free(struct SubordSeries *s);

// Number of terms past the lowest exponent; 0 for a null handle.
//
// # Safety
// `s` must be a live handle or null.
uintptr_t subord_series_order(const struct SubordSeries *s);

// Lowest stored exponent; 0 for a null handle.
//
// # Safety
// `s` must be a live handle or null.
int32_t subord_series_low_exp(const struct SubordSeries *s);

// Coefficient of `z^k`; `Domain` when `k` lies outside the valid window.
//
// # Safety
// `s` must be a live handle; `re`, `im` writable.
enum SubordStatus subord_series_coeff(const struct SubordSeries *s,
                                      int32_t k,
                                      double *re,
                                      double *im);

// Value of the stored polynomial at `z`.
//
// # Safety
// `s` must be a live handle; `re`, `im` writable.
enum SubordStatus subord_series_evaluate(const struct SubordSeries *s,
                                         double z_re,
                                         double z_im,
                                         double *re,
                                         double *im);

// `a * b` as a new handle.
//
// # Safety
// `a`, `b` live handles; `out` writable.
enum SubordStatus subord_series_mul(const struct SubordSeries *a,
                                    const struct SubordSeries *b,
                                    struct SubordSeries **out);

// `a / b` as a new handle.
//
// # Safety
// `a`, `b` live handles; `out` writable.
enum SubordStatus subord_series_div(const struct SubordSeries *a,
                                    const struct SubordSeries *b,
                                    struct SubordSeries **out);

// `a + b` as a new handle.
//
// # Safety
// `a`, `b` live handles; `out` writable.
enum SubordStatus subord_series_add(const struct SubordSeries *a,
                                    const struct SubordSeries *b,
                                    struct SubordSeries **out);

// # Safety
// `out` writable.
enum SubordStatus subord_sigma_max(double rho, uint32_t n, double mu, double *out);

// # Safety
// `out` writable.
enum SubordStatus subord_delta_quadratic(double alpha,
                                         double beta,
                                         double gamma,
                                         uint32_t n,
                                         double mu,
                                         double *out);

// # Safety
// `out` writable.
enum SubordStatus subord_delta_linear(double beta,
                                      double gamma,
                                      uint32_t n,
                                      double mu,
                                      double *out);

// # Safety
// `out` writable.
enum SubordStatus subord_delta_logderiv_mixed(double alpha,
                                              double beta,
                                              uint32_t n,
                                              double mu,
                                              double *out);

// # Safety
// `out` writable.
enum SubordStatus subord_delta_logderiv_pure(double beta, uint32_t n, double mu, double *out);

// # Safety
// `out` writable.
enum SubordStatus subord_delta_briot_bouquet(double alpha,
                                             double beta,
                                             double gamma,
                                             uint32_t n,
                                             double mu,
                                             double *out);

// # Safety
// `out` writable.
enum SubordStatus subord_delta_square(double beta,
                                      double gamma,
                                      uint32_t n,
                                      double mu,
                                      double *out);

// Thresholds of the analytic (`meromorphic == 0`) or meromorphic variant.
//
// # Safety
// `out` writable.
enum SubordStatus subord_threshold_set(double alpha,
                                       double beta,
                                       double gamma,
                                       uint32_t n,
                                       double mu,
                                       bool meromorphic,
                                       struct SubordThresholds *out);

// Admissibility scan for a lemma id such as `"L2_5"`, over `points` values
// of rho and `depth + 1` sigma levels.
//
// # Safety
// `lemma` a NUL-terminated string; `out` writable.
enum SubordStatus subord_admissibility_scan(const char *lemma,
                                            double alpha,
                                            double beta,
                                            double gamma,
                                            uint32_t n,
                                            double mu,
                                            uintptr_t depth,
                                            uintptr_t points,
                                            struct SubordScan *out);

// Runs the sampled verification for one result and writes the JSON report
// to `*out_json` (free it with `subord_string_free`).
//
// # Safety
// `result_id` a NUL-terminated string; `out_json` writable.
enum SubordStatus subord_verify_json(const char *result_id,
                                     double alpha,
                                     double beta,
                                     double gamma,
                                     uint32_t n,
                                     double mu,
                                     uintptr_t trials,
                                     uint64_t seed,
                                     char **out_json);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void subord_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUBORD_H */
