#ifndef APO_H
#define APO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum ApoStatus {
  APO_STATUS_OK = 0,
  APO_STATUS_NULL_POINTER = 1,
  APO_STATUS_INVALID_ARGUMENT = 2,
  APO_STATUS_DIMENSION = 3,
  APO_STATUS_PARAMETER = 4,
  APO_STATUS_BUDGET = 5,
  APO_STATUS_INVALID_FITNESS = 6,
  APO_STATUS_CONFIG = 7,
  APO_STATUS_INPUT = 8,
  APO_STATUS_OUT_OF_RANGE = 9,
  APO_STATUS_INTERNAL = 10,
  APO_STATUS_PANIC = 11,
} ApoStatus;

/**
 * Opaque run result.
 */
typedef struct ApoResultHandle ApoResultHandle;

/**
 * Objective callback: returns `f(x)` for the `dim` values at `x`.
 */
typedef double (*ApoObjectiveCallback)(const double *x, size_t dim, void *user_data);

/**
 * One line of the convergence trace.
 */
typedef struct ApoTraceEntry {
  size_t iter;
  size_t fes;
  double best;
  double diversity;
} ApoTraceEntry;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *apo_last_error_message(void);

/**
 * Minimizes a registered benchmark function (e.g. `"sphere"`) over
 * `[-100, 100]^dim`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ApoStatus apo_optimize_benchmark(const char *name,
                                      size_t dim,
                                      size_t ps,
                                      size_t np,
                                      double pf_max,
                                      size_t max_fes,
                                      uint64_t seed,
                                      struct ApoResultHandle **out);

/**
 * Minimizes a caller-supplied objective over the box `[lower, upper]`.
 *
 * # Safety
 * `lower` and `upper` must point to `dim` doubles, `out` must be valid, and
 * `callback` must be safe to call with `user_data` for the duration of the run.
 */
enum ApoStatus apo_optimize_callback(ApoObjectiveCallback callback,
                                     void *user_data,
                                     const double *lower,
                                     const double *upper,
                                     size_t dim,
                                     size_t ps,
                                     size_t np,
                                     double pf_max,
                                     size_t max_fes,
                                     uint64_t seed,
                                     struct ApoResultHandle **out);

/**
 * Best objective value, or NaN for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
double apo_result_best_fitness(const struct ApoResultHandle *h);

/**
 * Dimension of the best position (0 for a null handle).
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t apo_result_dim(const struct ApoResultHandle *h);

/**
 * Evaluations consumed (0 for a null handle).
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t apo_result_fes_used(const struct ApoResultHandle *h);

/**
 * Copies the best position into `out`, which must hold `len >= dim` doubles.
 *
 * # Safety
 * `h` must be null or a live handle; `out` must point to `len` writable doubles.
 */
enum ApoStatus apo_result_best_position(const struct ApoResultHandle *h, double *out, size_t len);

/**
 * Number of trace entries (0 for a null handle).
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t apo_result_trace_len(const struct ApoResultHandle *h);

/**
 * Reads trace entry `index`.
 *
 * # Safety
 * `h` must be null or a live handle; `out` must be a valid pointer.
 */
enum ApoStatus apo_result_trace_entry(const struct ApoResultHandle *h,
                                      size_t index,
                                      struct ApoTraceEntry *out);

/**
 * Releases a result. Null is ignored.
 *
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void apo_result_free(struct ApoResultHandle *h);

/**
 * Minimum cross-entropy thresholds for a 256-bin histogram. Writes `n` gray
 * values (0-based, strictly increasing) to `thresholds` and the objective
 * value to `objective` when it is not null.
 *
 * # Safety
 * `counts` must point to 256 values and `thresholds` to `n` writable values.
 */
enum ApoStatus apo_mcet_thresholds(const uint64_t *counts,
                                   size_t n,
                                   size_t ps,
                                   size_t iters,
                                   uint64_t seed,
                                   uint32_t *thresholds,
                                   double *objective);

/**
 * PSNR in dB between two interleaved RGB images; `+inf` when identical.
 *
 * # Safety
 * `a` and `b` must point to `3 * width * height` bytes; `out` must be valid.
 */
enum ApoStatus apo_psnr(const uint8_t *a,
                        const uint8_t *b,
                        size_t width,
                        size_t height,
                        double *out);

/**
 * Mean SSIM over 8x8 windows and channels of two interleaved RGB images.
 *
 * # Safety
 * `a` and `b` must point to `3 * width * height` bytes; `out` must be valid.
 */
enum ApoStatus apo_ssim(const uint8_t *a,
                        const uint8_t *b,
                        size_t width,
                        size_t height,
                        double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* APO_H */
