#ifndef CUTCYL_H
#define CUTCYL_H

/* Generated by cbindgen from cutcyl-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes of the C interface.
 */
typedef enum CutcylStatus {
  CutcylStatus_Ok = 0,
  CutcylStatus_NullPointer = 1,
  CutcylStatus_InvalidUtf8 = 2,
  CutcylStatus_InvalidArgument = 3,
  CutcylStatus_UnknownProfile = 4,
  /**
   * nu outside (inf m, m(0)), or a degenerate turning height.
   */
  CutcylStatus_DomainError = 5,
  /**
   * The profile fails both the positive-equator hypotheses and the
   * nonpositive-curvature case.
   */
  CutcylStatus_HypothesisFailure = 6,
  /**
   * phi(m(t_q)) indistinguishable from pi at the working precision.
   */
  CutcylStatus_AmbiguousClassification = 7,
  CutcylStatus_NumericError = 8,
  CutcylStatus_InternalError = 9,
} CutcylStatus;

/**
 * Opaque warping-profile handle.
 */
typedef struct CutcylProfile CutcylProfile;

/**
 * One named profile parameter.
 */
typedef struct CutcylParam {
  const char *name;
  double value;
} CutcylParam;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message into `buf` (NUL-terminated, truncated to
 * `cap`). Returns the full message length in bytes, excluding the NUL.
 */
uintptr_t cutcyl_last_error(char *buf, uintptr_t cap);

/**
 * Create a gallery profile by name ("gauss", "sech", "hourglass",
 * "catenoid", "flat") with optional parameters. On success writes a handle
 * to `out`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `params` must point to `n_params`
 * valid entries (or be NULL when `n_params` is 0); `out` must be valid.
 */
enum CutcylStatus cutcyl_profile_new(const char *name,
                                     const struct CutcylParam *params,
                                     uintptr_t n_params,
                                     struct CutcylProfile **out);

/**
 * Destroy a profile handle. NULL is a no-op.
 *
 * # Safety
 * `p` must be a handle from [`cutcyl_profile_new`], not yet freed.
 */
void cutcyl_profile_free(struct CutcylProfile *p);

/**
 * Warping function m(t).
 *
 * # Safety
 * `p` must be a live handle; `out` must be valid.
 */
enum CutcylStatus cutcyl_m(const struct CutcylProfile *p, double t, double *out);

/**
 * Gaussian curvature K(t) = -m''(t)/m(t).
 *
 * # Safety
 * `p` must be a live handle; `out` must be valid.
 */
enum CutcylStatus cutcyl_curvature(const struct CutcylProfile *p, double t, double *out);

/**
 * Tangency height xi(nu): least t > 0 with m(t) = nu.
 *
 * # Safety
 * `p` must be a live handle; `out` must be valid.
 */
enum CutcylStatus cutcyl_tangency_height(const struct CutcylProfile *p, double nu, double *out);

/**
 * Half-period phi(nu) with an estimated absolute error bounded by `tol`.
 * `out_err` may be NULL.
 *
 * # Safety
 * `p` must be a live handle; `out_value` must be valid.
 */
enum CutcylStatus cutcyl_half_period(const struct CutcylProfile *p,
                                     double nu,
                                     double tol,
                                     double *out_value,
                                     double *out_err);

/**
 * Arc length l(nu) of the half-period arc, cross-checked against its second
 * integral form. `out_err` may be NULL.
 *
 * # Safety
 * `p` must be a live handle; `out_value` must be valid.
 */
enum CutcylStatus cutcyl_half_period_length(const struct CutcylProfile *p,
                                            double nu,
                                            double tol,
                                            double *out_value,
                                            double *out_err);

/**
 * Profile analysis (t0, t1, inf m, hypothesis flags) as a JSON string.
 * Free the string with [`cutcyl_string_free`].
 *
 * # Safety
 * `p` must be a live handle; `out_json` must be valid.
 */
enum CutcylStatus cutcyl_analyze_json(const struct CutcylProfile *p,
                                      double t_max,
                                      uintptr_t grid_n,
                                      char **out_json);

/**
 * Cut-locus classification of the base point (t_q, 0) as a JSON string.
 * Free the string with [`cutcyl_string_free`].
 *
 * # Safety
 * `p` must be a live handle; `out_json` must be valid.
 */
enum CutcylStatus cutcyl_cut_locus_json(const struct CutcylProfile *p,
                                        double t_max,
                                        uintptr_t grid_n,
                                        double t_q,
                                        double tol,
                                        char **out_json);

/**
 * Free a string returned by one of the `_json` calls. NULL is a no-op.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cutcyl_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CUTCYL_H */
