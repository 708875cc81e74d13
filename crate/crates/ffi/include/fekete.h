#ifndef FEKETE_H
#define FEKETE_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FeketeStatus {
  FEKETE_STATUS_OK = 0,
  FEKETE_STATUS_NULL_POINTER = 1,
  FEKETE_STATUS_NOT_ODD_PRIME = 2,
  FEKETE_STATUS_INVALID_ARGUMENT = 3,
  FEKETE_STATUS_PRECISION = 4,
  FEKETE_STATUS_OVERFLOW = 5,
  FEKETE_STATUS_DEGENERATE_MERIT_FACTOR = 6,
  FEKETE_STATUS_BUFFER_TOO_SMALL = 7,
  FEKETE_STATUS_OUT_OF_RANGE = 8,
  FEKETE_STATUS_PANIC = 9,
} FeketeStatus;

/**
 * The records of one convergence run, sorted by prime.
 */
typedef struct FeketeRecords FeketeRecords;

/**
 * A generalized Fekete sequence, raw or with zeros replaced by +1.
 */
typedef struct FeketeSequence FeketeSequence;

typedef struct FeketeRecordConstants {
  double t0;
  double r0;
  double c;
  double merit_factor_limit;
} FeketeRecordConstants;

/**
 * One finite-p measurement. The exact fourth power of the L4 norm is split
 * into high and low 64-bit halves.
 */
typedef struct FeketeRecord {
  uint64_t p;
  int64_t r;
  size_t t;
  uint64_t l4_pow4_hi;
  uint64_t l4_pow4_lo;
  double ratio4;
  double limit;
  double abs_err;
  double rel_err;
} FeketeRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated description of a status code.
 */
const char *fekete_status_message(enum FeketeStatus status);

/**
 * Legendre symbol `(a | p)`.
 *
 * # Safety
 * `out` must be null or valid for a write.
 */
enum FeketeStatus fekete_legendre(int64_t a, uint64_t p, int8_t *out);

/**
 * Build the coefficients `(j + r | p)`, `0 <= j < t`, replacing zeros by +1
 * when `littlewood` is set.
 *
 * # Safety
 * `out` must be null or valid for a write.
 */
enum FeketeStatus fekete_sequence_new(uint64_t p,
                                      int64_t r,
                                      size_t t,
                                      bool littlewood,
                                      struct FeketeSequence **out);

/**
 * # Safety
 * `handle` must be null or come from `fekete_sequence_new` and not have
 * been freed.
 */
void fekete_sequence_free(struct FeketeSequence *handle);

/**
 * Number of coefficients, or 0 for a null handle.
 *
 * # Safety
 * `handle` must be null or a live sequence handle.
 */
size_t fekete_sequence_len(const struct FeketeSequence *handle);

/**
 * Copy the coefficients into `buf`. `written` receives the sequence length
 * even when `capacity` is too small.
 *
 * # Safety
 * `handle` must be a live sequence handle, `buf` valid for `capacity`
 * writes and `written` null or valid for a write.
 */
enum FeketeStatus fekete_sequence_coeffs(const struct FeketeSequence *handle,
                                         int8_t *buf,
                                         size_t capacity,
                                         size_t *written);

/**
 * `||f||_2^2`.
 *
 * # Safety
 * `handle` must be a live sequence handle and `out` valid for a write.
 */
enum FeketeStatus fekete_sequence_l2_pow2(const struct FeketeSequence *handle, uint64_t *out);

/**
 * Exact `||f||_4^4`. Fails with `FEKETE_STATUS_OVERFLOW` past `u64`.
 *
 * # Safety
 * `handle` must be a live sequence handle and `out` valid for a write.
 */
enum FeketeStatus fekete_sequence_l4_pow4(const struct FeketeSequence *handle,
                                          bool naive,
                                          uint64_t *out);

/**
 * `||f||_2^4 / (||f||_4^4 - ||f||_2^4)`.
 *
 * # Safety
 * `handle` must be a live sequence handle and `out` valid for a write.
 */
enum FeketeStatus fekete_sequence_merit_factor(const struct FeketeSequence *handle, double *out);

/**
 * Asymptotic ratio `u(R, T)`.
 *
 * # Safety
 * `out` must be null or valid for a write.
 */
enum FeketeStatus fekete_limit_u(double r, double t, double *out);

/**
 * # Safety
 * `out` must be null or valid for a write.
 */
enum FeketeStatus fekete_record_constants(struct FeketeRecordConstants *out);

/**
 * Exact norms at `count` primes spread geometrically over `[p_lo, p_hi]`.
 *
 * # Safety
 * `out` must be null or valid for a write.
 */
enum FeketeStatus fekete_convergence_run(double r,
                                         double t,
                                         uint64_t p_lo,
                                         uint64_t p_hi,
                                         size_t count,
                                         struct FeketeRecords **out);

/**
 * # Safety
 * `handle` must be null or a live records handle.
 */
size_t fekete_records_len(const struct FeketeRecords *handle);

/**
 * # Safety
 * `handle` must be a live records handle and `out` valid for a write.
 */
enum FeketeStatus fekete_records_get(const struct FeketeRecords *handle,
                                     size_t index,
                                     struct FeketeRecord *out);

/**
 * # Safety
 * `handle` must be null or come from `fekete_convergence_run` and not have
 * been freed.
 */
void fekete_records_free(struct FeketeRecords *handle);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FEKETE_H */
