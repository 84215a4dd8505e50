#ifndef BW_DIST_H
#define BW_DIST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BwStatus {
  BW_STATUS_OK = 0,
  BW_STATUS_NULL_POINTER = 1,
  BW_STATUS_DOMAIN = 2,
  BW_STATUS_RANGE = 3,
  BW_STATUS_CONVERGENCE = 4,
  BW_STATUS_INTEGRATION = 5,
  BW_STATUS_VALIDITY = 6,
  BW_STATUS_PARSE = 7,
  BW_STATUS_REPORT = 8,
  BW_STATUS_IO = 9,
  BW_STATUS_BUFFER_TOO_SMALL = 10,
  BW_STATUS_PANIC = 11,
} BwStatus;

typedef enum BwModel {
  BW_MODEL_BW = 0,
  BW_MODEL_BURR_III = 1,
  BW_MODEL_WEIBULL = 2,
} BwModel;

/**
 * Opaque distribution handle.
 */
typedef struct BwDist BwDist;

/**
 * Opaque fit-result handle.
 */
typedef struct BwFit BwFit;

typedef struct BwMomentSummary {
  double raw_moments[6];
  double sd;
  double cv;
  double skewness;
  double kurtosis;
} BwMomentSummary;

typedef struct BwFitSummary {
  double log_likelihood;
  double aic;
  double bic;
  double aicc;
  double gradient_norm;
  size_t n;
  uint64_t iterations;
  bool converged;
} BwFitSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL terminated,
 * truncated to `len - 1` bytes). Returns the full message length in bytes.
 *
 * # Safety
 * `buf` must be null or point to at least `len` writable bytes.
 */
size_t bw_last_error_message(char *buf, size_t len);

/**
 * Creates a distribution handle; all four parameters must be finite and positive.
 *
 * # Safety
 * `out_dist` must be a valid pointer to writable storage for one handle pointer.
 */
enum BwStatus bw_dist_new(double c, double k, double lambda, double beta, struct BwDist **out_dist);

/**
 * # Safety
 * `d` must be null or a handle from `bw_dist_new` not yet freed.
 */
void bw_dist_free(struct BwDist *d);

/**
 * # Safety
 * `d` must be a live handle and `y` a valid pointer.
 */
enum BwStatus bw_dist_pdf(const struct BwDist *d, double x, double *y);

/**
 * # Safety
 * `d` must be a live handle and `y` a valid pointer.
 */
enum BwStatus bw_dist_cdf(const struct BwDist *d, double x, double *y);

/**
 * # Safety
 * `d` must be a live handle and `y` a valid pointer.
 */
enum BwStatus bw_dist_survival(const struct BwDist *d, double x, double *y);

/**
 * # Safety
 * `d` must be a live handle and `y` a valid pointer.
 */
enum BwStatus bw_dist_hazard(const struct BwDist *d, double x, double *y);

/**
 * # Safety
 * `d` must be a live handle and `x` a valid pointer.
 */
enum BwStatus bw_dist_quantile(const struct BwDist *d, double u, double *x);

/**
 * Writes `n` variates from stream `(seed, stream)` into `buf`.
 *
 * # Safety
 * `d` must be a live handle and `buf` must hold `n` writable doubles.
 */
enum BwStatus bw_dist_sample(const struct BwDist *d,
                             size_t n,
                             uint64_t seed,
                             uint64_t stream,
                             double *buf);

/**
 * # Safety
 * `d` must be a live handle and `m` a valid pointer.
 */
enum BwStatus bw_dist_moments(const struct BwDist *d, struct BwMomentSummary *m);

/**
 * Maximum likelihood fit of `model` to `n` observations.
 *
 * # Safety
 * `data` must point to `n` readable doubles and `out_fit` to writable storage
 * for one handle pointer.
 */
enum BwStatus bw_fit(const double *data,
                     size_t n,
                     enum BwModel model,
                     size_t multistart,
                     uint64_t seed,
                     struct BwFit **out_fit);

/**
 * # Safety
 * `f` must be null or a handle from `bw_fit` not yet freed.
 */
void bw_fit_free(struct BwFit *f);

/**
 * Copies the fitted parameters (4 for BW, 2 for the components) into `buf`
 * and their count into `count`.
 *
 * # Safety
 * `f` must be a live handle, `buf` must hold `len` doubles and `count` must be valid.
 */
enum BwStatus bw_fit_params(const struct BwFit *f, double *buf, size_t len, size_t *count);

/**
 * # Safety
 * `f` must be a live handle and `s` a valid pointer.
 */
enum BwStatus bw_fit_summary(const struct BwFit *f, struct BwFitSummary *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BW_DIST_H */
