#ifndef TRIMDIST_H
#define TRIMDIST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TdStatus {
  TD_STATUS_OK = 0,
  TD_STATUS_INVALID_INPUT = 1,
  TD_STATUS_UNSUPPORTED_DISTRIBUTION = 2,
  TD_STATUS_UNSUPPORTED_CASE = 3,
  TD_STATUS_BOUNDARY_DEGENERATE = 4,
  TD_STATUS_DEGENERATE_CASE = 5,
  TD_STATUS_NOT_ATTAINED = 6,
  TD_STATUS_NULL_POINTER = 7,
  TD_STATUS_BUFFER_TOO_SMALL = 8,
  TD_STATUS_PANIC = 9,
} TdStatus;

/**
 * Curves stored in a [`TdTrimResult`].
 */
typedef enum TdCurve {
  /**
   * The optimal trimming function `h_α`.
   */
  TD_CURVE_H_OPT = 0,
  /**
   * `h_α(t) - t / (1 - α)`.
   */
  TD_CURVE_H_TILDE = 1,
  /**
   * `Γ = F0 ∘ F⁻¹`.
   */
  TD_CURVE_GAMMA = 2,
} TdCurve;

typedef enum TdRegime {
  TD_REGIME_LOCATION_SHIFT = 0,
  TD_REGIME_SCALE_BELOW_ONE = 1,
  TD_REGIME_SCALE_IN_BAND = 2,
  TD_REGIME_SCALE_ABOVE_BAND = 3,
} TdRegime;

/**
 * Opaque distribution handle.
 */
typedef struct TdDistribution TdDistribution;

/**
 * Opaque result of [`td_trimmed_distance`].
 */
typedef struct TdTrimResult TdTrimResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *td_last_error(void);

/**
 * `N(mu, sigma²)`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum TdStatus td_distribution_normal(double mu, double sigma, struct TdDistribution **out);

/**
 * `U(a, b)`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum TdStatus td_distribution_uniform(double a, double b, struct TdDistribution **out);

/**
 * Empirical law of `n` values; the data is copied.
 *
 * # Safety
 * `sample` must point to `n` readable doubles and `out` to writable storage.
 */
enum TdStatus td_distribution_empirical(const double *sample,
                                        size_t n,
                                        struct TdDistribution **out);

/**
 * `(1 - alpha) base + alpha other`. The inputs stay owned by the caller.
 *
 * # Safety
 * `base` and `other` must be live handles and `out` writable.
 */
enum TdStatus td_distribution_mixture(const struct TdDistribution *base,
                                      const struct TdDistribution *other,
                                      double alpha,
                                      struct TdDistribution **out);

/**
 * # Safety
 * `dist` must be null or a handle from this library not yet freed.
 */
void td_distribution_free(struct TdDistribution *dist);

/**
 * # Safety
 * `dist` must be a live handle and `out` writable.
 */
enum TdStatus td_distribution_cdf(const struct TdDistribution *dist, double x, double *out);

/**
 * `d_K(F0, R_α(F))`. `grid_size` is ignored for an empirical `f`.
 *
 * # Safety
 * `f0` and `f` must be live handles and `out` writable.
 */
enum TdStatus td_trimmed_distance(const struct TdDistribution *f0,
                                  const struct TdDistribution *f,
                                  double alpha,
                                  size_t grid_size,
                                  struct TdTrimResult **out);

/**
 * # Safety
 * `result` must be a live handle and `out` writable.
 */
enum TdStatus td_trim_result_distance(const struct TdTrimResult *result, double *out);

/**
 * Number of `(t, value)` rows in a curve, counting both sides of a jump.
 *
 * # Safety
 * `result` must be a live handle and `out` writable.
 */
enum TdStatus td_trim_result_curve_len(const struct TdTrimResult *result,
                                       enum TdCurve which,
                                       size_t *out);

/**
 * Copies a curve's rows into `t` and `value`, each of capacity `cap`.
 * At a jump the left value comes first. Fails with
 * `TD_STATUS_BUFFER_TOO_SMALL` when `cap` is short, writing nothing.
 *
 * # Safety
 * `t` and `value` must each point to `cap` writable doubles.
 */
enum TdStatus td_trim_result_curve_copy(const struct TdTrimResult *result,
                                        enum TdCurve which,
                                        double *t,
                                        double *value,
                                        size_t cap);

/**
 * # Safety
 * `result` must be null or a handle from this library not yet freed.
 */
void td_trim_result_free(struct TdTrimResult *result);

/**
 * Closed form for `N(mu, sigma²)` against `N(0, 1)`. `regime` may be null.
 *
 * # Safety
 * `distance` must be writable; `regime` null or writable.
 */
enum TdStatus td_gaussian_trimmed_distance(double mu,
                                           double sigma,
                                           double alpha,
                                           double *distance,
                                           enum TdRegime *regime);

/**
 * Smallest `alpha` with distance at most `threshold`.
 *
 * # Safety
 * `f0` and `f` must be live handles and `alpha_hat` writable.
 */
enum TdStatus td_min_contamination_level(const struct TdDistribution *f0,
                                         const struct TdDistribution *f,
                                         double threshold,
                                         size_t grid_size,
                                         double *alpha_hat);

/**
 * Bisection oracle on the step heights `F0(x_(1)), ..., F0(x_(n))`.
 *
 * # Safety
 * `heights` must point to `n` readable doubles and `out` be writable.
 */
enum TdStatus td_oracle_distance(const double *heights, size_t n, double alpha, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIMDIST_H */
