#ifndef FACTOR_AVOID_H
#define FACTOR_AVOID_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum FaStatus {
  FA_STATUS_OK = 0,
  // A required pointer was null or a buffer was too small.
  FA_STATUS_NULL_OR_SHORT = 1,
  // Malformed JSON, words, alphabets or interval families.
  FA_STATUS_INVALID_INPUT = 2,
  // A result does not fit the output type.
  FA_STATUS_OVERFLOW = 3,
  // The problem would enumerate too many words.
  FA_STATUS_TOO_LARGE = 4,
  // A verification identity failed.
  FA_STATUS_VERIFICATION_FAILED = 5,
  // An internal error; please report it.
  FA_STATUS_INTERNAL = 6,
} FaStatus;

// An opaque validated problem.
typedef struct FaProblem FaProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a problem from `{"alphabet": [...], "forbidden": [...], "max_len": n}`.
//
// # Safety
// `json` must be a nul-terminated string and `out` a valid pointer.
enum FaStatus fa_problem_from_json(const char *json, struct FaProblem **out);

// Releases a problem. Null is ignored.
//
// # Safety
// `problem` must come from [`fa_problem_from_json`] and not be used again.
void fa_problem_free(struct FaProblem *problem);

// The problem's maximal word length; 0 for a null handle.
//
// # Safety
// `problem` must be null or a live handle.
size_t fa_problem_max_len(const struct FaProblem *problem);

// Writes the number of avoiding words of length `0..=max_len` into `out`,
// which must hold `max_len + 1` entries.
//
// # Safety
// `out` must point to `out_len` writable `uint64_t`.
enum FaStatus fa_count_avoiding(const struct FaProblem *problem, uint64_t *out, size_t out_len);

// The nonzero coefficients of the reciprocal of the avoiding series as
// `[{"word", "M", "provenance"}]`, after checking that all three
// computations agree.
//
// # Safety
// `out` must be a valid pointer; the result is freed with [`fa_string_free`].
enum FaStatus fa_m_table_json(const struct FaProblem *problem, char **out);

// The cluster polynomial of `word`, such as `"t^2 + t^3"`.
//
// # Safety
// `word` must be nul-terminated; `out` must be a valid pointer.
enum FaStatus fa_cluster_polynomial(const struct FaProblem *problem, const char *word, char **out);

// Runs every identity check and writes the report as JSON. Returns
// [`FaStatus::VerificationFailed`] when a check fails; the report is still
// written.
//
// # Safety
// `out` must be a valid pointer.
enum FaStatus fa_verify_json(const struct FaProblem *problem, char **out);

// `mu(0, top)` for the lattice of unions of the intervals
// `{bounds[2i], ..., bounds[2i+1]}`, `i < count`.
//
// # Safety
// `bounds` must point to `2 * count` readable `int64_t`.
enum FaStatus fa_mobius(const int64_t *bounds, size_t count, int64_t *out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used again.
void fa_string_free(char *s);

// The last error on this thread, or null. Valid until the next call into
// this library on the same thread.
const char *fa_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FACTOR_AVOID_H */
