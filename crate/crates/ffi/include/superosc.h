#ifndef SUPEROSC_H
#define SUPEROSC_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SoStatus {
  SO_STATUS_OK = 0,
  SO_STATUS_NULL_POINTER = 1,
  SO_STATUS_INVALID_ARGUMENT = 2,
  SO_STATUS_NUMERICAL = 3,
  SO_STATUS_OVERFLOW = 4,
  /**
   * First-order probability above 0.1; the value is still written.
   */
  SO_STATUS_BREAKDOWN = 5,
  SO_STATUS_BUFFER_TOO_SMALL = 6,
  SO_STATUS_PANIC = 7,
} SoStatus;

/**
 * Parameters of one superoscillatory function.
 */
typedef struct SoParams SoParams;

/**
 * Samples on a uniform grid.
 */
typedef struct SoSignal SoSignal;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *so_version(void);

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`) and returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t so_last_error_message(char *buf, size_t len);

/**
 * Builds parameters from `δ`, `A`, `k₀` and `D`. A non-positive `extent`
 * selects the largest window the criterion admits.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one pointer.
 */
enum SoStatus so_params_new(double delta,
                            double boost,
                            double band_limit,
                            double amplitude,
                            double extent,
                            struct SoParams **out);

/**
 * # Safety
 * `p` must be null or come from [`so_params_new`] and not be freed twice.
 */
void so_params_free(struct SoParams *p);

/**
 * Centre of the growth region, `2 cosh A/(k₀δ²)`.
 *
 * # Safety
 * `p` and `out` must be valid.
 */
enum SoStatus so_params_growth_peak(const struct SoParams *p, double *out);

/**
 * Closed-form `F(z)`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum SoStatus so_synth_bessel(const struct SoParams *p, double z, double *re, double *im);

/**
 * `F(z)` by adaptive quadrature; `err` receives the error estimate.
 *
 * # Safety
 * All pointers must be valid; `err` may be null.
 */
enum SoStatus so_synth_integral(const struct SoParams *p,
                                double z,
                                double *re,
                                double *im,
                                double *err);

/**
 * Samples the closed form at `start + i·step`, `i < len`.
 *
 * # Safety
 * `p` and `out` must be valid.
 */
enum SoStatus so_signal_sample(const struct SoParams *p,
                               double start,
                               double step,
                               size_t len,
                               struct SoSignal **out);

/**
 * Real signal from caller-owned samples on a uniform grid; `k_max` is the
 * fastest expected wavenumber.
 *
 * # Safety
 * `values` must point to `len` readable doubles and `out` must be valid.
 */
enum SoStatus so_signal_from_real(double start,
                                  double step,
                                  const double *values,
                                  size_t len,
                                  double k_max,
                                  struct SoSignal **out);

/**
 * # Safety
 * `s` must be null or come from a `so_signal_*` constructor.
 */
void so_signal_free(struct SoSignal *s);

/**
 * # Safety
 * `s` must be valid.
 */
size_t so_signal_len(const struct SoSignal *s);

/**
 * Copies physical sample values. Fails with `BufferTooSmall` when
 * `len < so_signal_len(s)` and with `Overflow` when values exceed double
 * range.
 *
 * # Safety
 * `re` and `im` must point to `len` writable doubles.
 */
enum SoStatus so_signal_values(const struct SoSignal *s, double *re, double *im, size_t len);

/**
 * First-order probability `P(t)` for a particle with gap `gap`, coupling
 * `coupling` at `position`. Returns `Breakdown` with `out` set when
 * `P > 0.1`.
 *
 * # Safety
 * `s` and `out` must be valid.
 */
enum SoStatus so_transition_probability(const struct SoSignal *s,
                                        double gap,
                                        double coupling,
                                        double position,
                                        double t,
                                        double *out);

/**
 * `I₂/E` at gap `omega` and time `t`; requires `Ωt ≥ 4π`.
 *
 * # Safety
 * `out` must be valid.
 */
enum SoStatus so_i2_ratio(double omega, double t, double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SUPEROSC_H */
