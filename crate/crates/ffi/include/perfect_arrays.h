#ifndef PERFECT_ARRAYS_H
#define PERFECT_ARRAYS_H

/* Generated by cbindgen from crates/ffi. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum PaStatus {
  PA_STATUS_OK = 0,
  PA_STATUS_NULL_POINTER = 1,
  PA_STATUS_INVALID_ARGUMENT = 2,
  PA_STATUS_DOMAIN_MISMATCH = 3,
  PA_STATUS_DIMENSION_MISMATCH = 4,
  PA_STATUS_PARSE_ERROR = 5,
  PA_STATUS_PRECONDITION_FAILED = 6,
  PA_STATUS_UNSUPPORTED = 7,
  PA_STATUS_BUFFER_TOO_SMALL = 8,
  PA_STATUS_IO_ERROR = 9,
  PA_STATUS_PANIC = 10,
} PaStatus;

/**
 * A constructed or loaded N-dimensional array.
 */
typedef struct PaArray PaArray;

/**
 * Correlation values over every shift vector.
 */
typedef struct PaCorrelation PaCorrelation;

/**
 * A base or block sequence.
 */
typedef struct PaSequence PaSequence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *pa_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void pa_string_free(char *s);

/**
 * Frank sequence of length `r * r` over `r` roots of unity.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum PaStatus pa_sequence_frank(uint32_t r, struct PaSequence **out);

/**
 * Parses the sequence JSON format.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum PaStatus pa_sequence_from_json(const char *json, struct PaSequence **out);

/**
 * Parses a token list such as `"1,k,1,-k"` or `"(0,1,0,0)"`.
 *
 * # Safety
 * `tokens` must be a NUL-terminated string and `out` writable.
 */
enum PaStatus pa_sequence_from_quaternion_tokens(const char *tokens, struct PaSequence **out);

/**
 * # Safety
 * `seq` must be a live handle and `out` writable.
 */
enum PaStatus pa_sequence_to_json(const struct PaSequence *seq, char **out);

/**
 * Length of the sequence, or 0 for NULL.
 *
 * # Safety
 * `seq` must be NULL or a live handle.
 */
size_t pa_sequence_len(const struct PaSequence *seq);

/**
 * `out[i] = seq[(t * i) mod n]`; requires `gcd(t, n) = 1`.
 *
 * # Safety
 * `seq` must be a live handle and `out` writable.
 */
enum PaStatus pa_sequence_decimate(const struct PaSequence *seq, size_t t, struct PaSequence **out);

/**
 * `out[i] = seq[(i - s) mod n]`.
 *
 * # Safety
 * `seq` must be a live handle and `out` writable.
 */
enum PaStatus pa_sequence_rotate_right(const struct PaSequence *seq,
                                       int64_t s,
                                       struct PaSequence **out);

/**
 * # Safety
 * `seq` must be a live handle and `out_perfect` writable.
 */
enum PaStatus pa_sequence_is_perfect(const struct PaSequence *seq, double tol, bool *out_perfect);

/**
 * Checks the array orthogonality property for divisor `d`. Reports whether
 * it holds and how many condition witnesses failed.
 *
 * # Safety
 * `seq` must be a live handle; both outputs writable.
 */
enum PaStatus pa_sequence_aop_check(const struct PaSequence *seq,
                                    size_t d,
                                    double tol,
                                    bool *out_holds,
                                    size_t *out_failures);

/**
 * # Safety
 * `seq` must be NULL or a handle not yet freed.
 */
void pa_sequence_free(struct PaSequence *seq);

/**
 * Builds the array for family parameter `k` with `dims` total dimensions
 * from base `base` and the `block_len` block sequences in `block`.
 * With `strict`, perfectness and the AOP of the inputs are checked first.
 *
 * # Safety
 * `base` and every `block[i]` must be live handles, `block` must point to
 * `block_len` handles and `out` must be writable.
 */
enum PaStatus pa_array_construct(const struct PaSequence *base,
                                 const struct PaSequence *const *block,
                                 size_t block_len,
                                 int64_t k,
                                 size_t dims,
                                 bool strict,
                                 struct PaArray **out);

/**
 * Parses the array JSON format.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum PaStatus pa_array_from_json(const char *json, struct PaArray **out);

/**
 * # Safety
 * `array` must be a live handle and `out` writable.
 */
enum PaStatus pa_array_to_json(const struct PaArray *array, char **out);

/**
 * Number of axes, or 0 for NULL.
 *
 * # Safety
 * `array` must be NULL or a live handle.
 */
size_t pa_array_ndim(const struct PaArray *array);

/**
 * Total cell count, or 0 for NULL.
 *
 * # Safety
 * `array` must be NULL or a live handle.
 */
size_t pa_array_len(const struct PaArray *array);

/**
 * Copies the axis lengths into `buf` (capacity `cap`).
 *
 * # Safety
 * `array` must be a live handle and `buf` must hold `cap` values.
 */
enum PaStatus pa_array_dims(const struct PaArray *array, size_t *buf, size_t cap);

/**
 * Root order `r` of a roots-of-unity array; `Unsupported` for quaternions.
 *
 * # Safety
 * `array` must be a live handle and `out` writable.
 */
enum PaStatus pa_array_root_order(const struct PaArray *array, uint32_t *out);

/**
 * Copies the exponents (row-major) into `buf`, which must hold `pa_array_len` values.
 *
 * # Safety
 * `array` must be a live handle and `buf` must hold `cap` values.
 */
enum PaStatus pa_array_exponents(const struct PaArray *array, uint32_t *buf, size_t cap);

/**
 * Copies quaternion entries as `w, x, y, z` quadruples; `buf` must hold
 * `4 * pa_array_len` values.
 *
 * # Safety
 * `array` must be a live handle and `buf` must hold `cap` values.
 */
enum PaStatus pa_array_quaternions(const struct PaArray *array, int64_t *buf, size_t cap);

/**
 * # Safety
 * `array` must be NULL or a handle not yet freed.
 */
void pa_array_free(struct PaArray *array);

/**
 * Periodic correlation `Σ a[x] · conj(b[x + s])` over every shift. Values
 * below `max(tol, relative · cells)` are chopped to zero; pass
 * `relative <= 0` for an absolute threshold only. `fast` selects the
 * transform route, which only roots-of-unity arrays support.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` writable.
 */
enum PaStatus pa_correlate(const struct PaArray *a,
                           const struct PaArray *b,
                           double tol,
                           double relative,
                           bool fast,
                           struct PaCorrelation **out);

/**
 * Number of values at or above the chop tolerance, or 0 for NULL.
 *
 * # Safety
 * `corr` must be NULL or a live handle.
 */
size_t pa_correlation_nonzero_count(const struct PaCorrelation *corr);

/**
 * Complex value at row-major shift index `flat`. Quaternion results return
 * `Unsupported`; use the JSON export for those.
 *
 * # Safety
 * `corr` must be a live handle; both outputs writable.
 */
enum PaStatus pa_correlation_value(const struct PaCorrelation *corr,
                                   size_t flat,
                                   double *out_re,
                                   double *out_im);

/**
 * Sparse JSON export of the non-zero values.
 *
 * # Safety
 * `corr` must be a live handle and `out` writable.
 */
enum PaStatus pa_correlation_to_json(const struct PaCorrelation *corr, char **out);

/**
 * # Safety
 * `corr` must be NULL or a handle not yet freed.
 */
void pa_correlation_free(struct PaCorrelation *corr);

/**
 * Autocorrelation check: perfect iff the only non-zero value is the peak.
 *
 * # Safety
 * `array` must be a live handle; both outputs writable.
 */
enum PaStatus pa_array_verify_perfect(const struct PaArray *array,
                                      double tol,
                                      bool *out_perfect,
                                      size_t *out_nonzero);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERFECT_ARRAYS_H */
