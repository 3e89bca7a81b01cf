#ifndef FPP_H
#define FPP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  FPP_STATUS_OK = 0,
  FPP_STATUS_NULL_POINTER = 1,
  FPP_STATUS_INVALID_INPUT = 2,
  FPP_STATUS_UNSUPPORTED = 3,
  FPP_STATUS_BUDGET_EXCEEDED = 4,
  FPP_STATUS_BUFFER_TOO_SMALL = 5,
  FPP_STATUS_INTERNAL = 6,
  FPP_STATUS_PANIC = 7,
} FppStatus;

/**
 * Opaque handle to a root datum.
 */
typedef struct FppDatum FppDatum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the datum named by `name` (e.g. `"F4"`, `"B8"`) into `*out`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
FppStatus fpp_datum_new(const char *name, FppDatum **out);

/**
 * Releases a datum; null is ignored.
 *
 * # Safety
 * `d` must come from [`fpp_datum_new`] and not be used afterwards.
 */
void fpp_datum_free(FppDatum *d);

/**
 * Rank of the datum, or 0 for null.
 *
 * # Safety
 * `d` must be null or a live handle.
 */
size_t fpp_datum_rank(const FppDatum *d);

/**
 * Writes the Cartan matrix row-major into `out`, which holds `len` entries.
 *
 * # Safety
 * `out` must point to `len` writable `int64_t`.
 */
FppStatus fpp_datum_cartan(const FppDatum *d, int64_t *out, size_t len);

/**
 * Dominant conjugate of the weight `num[k]/den[k]` (`den` may be null for
 * integral input). The result goes to `out_num`/`out_den` (`rank` entries
 * each) and the word, first letter first, to `word` of capacity `word_cap`.
 * `*word_len` is set even when the buffer is too small.
 *
 * # Safety
 * Arrays must be valid for the stated lengths.
 */
FppStatus fpp_dominantize(const FppDatum *d,
                          const int64_t *num,
                          const int64_t *den,
                          size_t len,
                          int64_t *out_num,
                          int64_t *out_den,
                          uint32_t *word,
                          size_t word_cap,
                          size_t *word_len);

/**
 * Node mask of `I(M_f)` for the integral dominant `eta`; bit `i-1` stands
 * for node `i`.
 *
 * # Safety
 * `eta` must hold `len` entries and `out` be writable.
 */
FppStatus fpp_levi_mask(const FppDatum *d, const int64_t *eta, size_t len, uint32_t *out);

/**
 * Node mask of `I(M_cx)`, same layout as [`fpp_levi_mask`].
 *
 * # Safety
 * `eta` must hold `len` entries and `out` be writable.
 */
FppStatus fpp_mcx_mask(const FppDatum *d, const int64_t *eta, size_t len, uint32_t *out);

/**
 * Runs the named case and stores its reports as a JSON array in `*out_json`.
 * `*verified` is 1 when every report is verified and 0 otherwise.
 *
 * # Safety
 * `name` must be NUL-terminated; `out_json` and `verified` writable.
 */
FppStatus fpp_verify_case(const char *name, char **out_json, int32_t *verified);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void fpp_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next call into the library on the same thread.
 */
const char *fpp_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FPP_H */
