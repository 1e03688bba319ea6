#ifndef DSINFO_H
#define DSINFO_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum DsinfoStatus {
  DSINFO_STATUS_OK = 0,
  DSINFO_STATUS_NULL_POINTER = 1,
  DSINFO_STATUS_INVALID_ARGUMENT = 2,
  DSINFO_STATUS_DATA_ERROR = 3,
  DSINFO_STATUS_LENGTH_ERROR = 4,
  DSINFO_STATUS_DEGENERATE = 5,
  DSINFO_STATUS_ALIGNMENT_ERROR = 6,
  DSINFO_STATUS_BUFFER_TOO_SMALL = 7,
  DSINFO_STATUS_INTERNAL = 8,
  DSINFO_STATUS_PANIC = 9,
} DsinfoStatus;

/**
 * Values accepted by the `algorithm_code` argument of `dsinfo_downsample`.
 */
typedef enum DsinfoAlgorithm {
  DSINFO_ALGORITHM_DECIMATE = 0,
  DSINFO_ALGORITHM_M4 = 1,
  DSINFO_ALGORITHM_MIN_MAX = 2,
  DSINFO_ALGORITHM_LTTB = 3,
  DSINFO_ALGORITHM_MIN_MAX_LTTB = 4,
} DsinfoAlgorithm;

/**
 * Opaque signal handle.
 */
typedef struct DsinfoSignal DsinfoSignal;

/**
 * The 13 distortion metrics; every entry is a distance (lower is closer).
 */
typedef struct DsinfoMetricVector {
  double rmse;
  double nmse;
  double pcc_dist;
  double scc_dist;
  double env_pcc_dist;
  double env_scc_dist;
  double zcr_delta;
  double peak_count_delta;
  double skew_delta;
  double kurt_delta;
  double psd_euclidean;
  double ncd;
  double jsd;
} DsinfoMetricVector;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the calling thread's last failure, or "" after a success.
 * The pointer stays valid until the next dsinfo call on this thread.
 */
const char *dsinfo_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *dsinfo_version(void);

/**
 * Copies `len` samples into a new signal sampled at `sample_rate_hz`.
 *
 * # Safety
 * `values` must point to `len` readable doubles and `out` to writable
 * storage for one handle pointer.
 */
enum DsinfoStatus dsinfo_signal_new(const double *values,
                                    size_t len,
                                    double sample_rate_hz,
                                    struct DsinfoSignal **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `signal` must be null or a handle from this library not freed before.
 */
void dsinfo_signal_free(struct DsinfoSignal *signal);

/**
 * Number of samples; 0 for a null handle.
 *
 * # Safety
 * `signal` must be null or a live handle.
 */
size_t dsinfo_signal_len(const struct DsinfoSignal *signal);

/**
 * Sample rate in Hz; 0 for a null handle.
 *
 * # Safety
 * `signal` must be null or a live handle.
 */
double dsinfo_signal_sample_rate(const struct DsinfoSignal *signal);

/**
 * Copies the samples into `buf`. `written` receives the sample count even
 * when `capacity` is too small (status BufferTooSmall).
 *
 * # Safety
 * `signal` must be a live handle, `buf` must have room for `capacity`
 * doubles and `written` must be writable.
 */
enum DsinfoStatus dsinfo_signal_values(const struct DsinfoSignal *signal,
                                       double *buf,
                                       size_t capacity,
                                       size_t *written);

/**
 * Parent-signal positions of the samples of a downsampled signal (i for
 * an original one). Same buffer contract as `dsinfo_signal_values`.
 *
 * # Safety
 * As for `dsinfo_signal_values`, with `buf` holding `capacity` size_t.
 */
enum DsinfoStatus dsinfo_signal_positions(const struct DsinfoSignal *signal,
                                          size_t *buf,
                                          size_t capacity,
                                          size_t *written);

/**
 * Downsamples `signal` by `factor` with `algorithm_code` (a DsinfoAlgorithm
 * value). MinMaxLTTB uses a pre-selection ratio of 4.
 *
 * # Safety
 * `signal` must be a live handle and `out` writable.
 */
enum DsinfoStatus dsinfo_downsample(const struct DsinfoSignal *signal,
                                    uint32_t algorithm_code,
                                    size_t factor,
                                    struct DsinfoSignal **out);

/**
 * All 13 metrics between an original and a signal downsampled from it.
 *
 * # Safety
 * Both handles must be live and `out` writable.
 */
enum DsinfoStatus dsinfo_metric_profile(const struct DsinfoSignal *original,
                                        const struct DsinfoSignal *downsampled,
                                        struct DsinfoMetricVector *out);

/**
 * Pairwise accuracy weighting pair i by exp(-lambda * accuracy_delta[i]);
 * `correct[i]` is nonzero when pair i was ordered correctly.
 *
 * # Safety
 * `correct` and `accuracy_delta` must hold `n` elements, `out` writable.
 */
enum DsinfoStatus dsinfo_weighted_accuracy(const uint8_t *correct,
                                           const double *accuracy_delta,
                                           size_t n,
                                           double lambda,
                                           double *out);

/**
 * Kendall's tau-b between two score sequences of length `n`.
 *
 * # Safety
 * `x` and `y` must hold `n` doubles, `out` writable.
 */
enum DsinfoStatus dsinfo_kendall_tau_b(const double *x, const double *y, size_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DSINFO_H */
