#ifndef ABTRIPLE_H
#define ABTRIPLE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum AbtError {
  ABT_ERROR_OK = 0,
  ABT_ERROR_NULL_POINTER = 1,
  ABT_ERROR_INVALID_PARAMS = 2,
  ABT_ERROR_INVALID_COLORING = 3,
  ABT_ERROR_PRECONDITION = 4,
  ABT_ERROR_PARSE = 5,
  // The requested field is not set for this outcome.
  ABT_ERROR_ABSENT = 6,
  ABT_ERROR_OUT_OF_RANGE = 7,
  // Search exceeded a proved upper bound; indicates a defect.
  ABT_ERROR_INTERNAL = 8,
  ABT_ERROR_PANIC = 9,
} AbtError;

// Status of a solve, mirroring `abtriple::Status`.
typedef enum AbtStatus {
  ABT_STATUS_EXACT = 0,
  ABT_STATUS_AT_LEAST = 1,
  ABT_STATUS_INFINITE = 2,
  ABT_STATUS_UNKNOWN = 3,
} AbtStatus;

// Opaque coloring of `[1, n]`.
typedef struct AbtColoring AbtColoring;

// Opaque result of [`abt_solve`].
typedef struct AbtOutcome AbtOutcome;

// A monochromatic triple `(x, y, z)` with difference `d`.
typedef struct AbtTriple {
  uint64_t x;
  uint64_t y;
  uint64_t z;
  uint64_t d;
} AbtTriple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the
// next failing call on the same thread.
const char *abt_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or a pointer obtained from this library, not yet freed.
void abt_string_free(char *s);

// Computes T(a,b;r). `cap = 0` uses the best known upper bound for two
// colors and 1000 otherwise; `budget_ms = 0` means no time limit.
// `threads = 0` reads `ABTRIPLE_THREADS`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum AbtError abt_solve(uint64_t a,
                        uint64_t b,
                        uint64_t r,
                        uint64_t cap,
                        uint64_t budget_ms,
                        uint32_t threads,
                        struct AbtOutcome **out);

// # Safety
// `h` must be null or a handle from [`abt_solve`], not yet freed.
void abt_outcome_free(struct AbtOutcome *h);

// # Safety
// `h` must be a live outcome handle and `status` writable.
enum AbtError abt_outcome_status(const struct AbtOutcome *h, enum AbtStatus *status);

// The value for exact outcomes, or the proved lower bound for capped ones.
// Returns `Absent` for infinite and unknown outcomes.
//
// # Safety
// `h` must be a live outcome handle and `value` writable.
enum AbtError abt_outcome_value(const struct AbtOutcome *h, uint64_t *value);

// The partial lower bound of an outcome whose budget ran out.
//
// # Safety
// `h` must be a live outcome handle and `lower` writable.
enum AbtError abt_outcome_lower(const struct AbtOutcome *h, uint64_t *lower);

// Copies out the witness coloring as a new handle, owned by the caller.
//
// # Safety
// `h` must be a live outcome handle and `out` writable.
enum AbtError abt_outcome_witness(const struct AbtOutcome *h, struct AbtColoring **out);

// JSON report of the outcome. `timing = false` reports 0 ms.
//
// # Safety
// `h` must be a live outcome handle and `json` writable. The string is
// released with [`abt_string_free`].
enum AbtError abt_outcome_json(const struct AbtOutcome *h, bool timing, char **json);

// Builds a coloring of `[1, n]` from `n` colors, each below `r`.
//
// # Safety
// `colors` must point to `n` readable bytes and `out` must be writable.
enum AbtError abt_coloring_new(uint64_t a,
                               uint64_t b,
                               uint64_t r,
                               const uint8_t *colors,
                               size_t n,
                               struct AbtColoring **out);

// Parses a witness file in the JSON format written by the CLI.
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum AbtError abt_coloring_from_json(const char *json, struct AbtColoring **out);

// # Safety
// `h` must be null or a live coloring handle.
void abt_coloring_free(struct AbtColoring *h);

// Length `n` of the colored interval, 0 for a null handle.
//
// # Safety
// `h` must be null or a live coloring handle.
size_t abt_coloring_len(const struct AbtColoring *h);

// Color of integer `i` in `[1, n]`.
//
// # Safety
// `h` must be a live coloring handle and `color` writable.
enum AbtError abt_coloring_get(const struct AbtColoring *h, size_t i, uint8_t *color);

// Looks for a monochromatic triple, least by largest element then by
// first element. Sets `*found` and, when found, `*triple`.
//
// # Safety
// `h` must be a live coloring handle; `found` and `triple` writable.
enum AbtError abt_coloring_verify(const struct AbtColoring *h,
                                  bool *found,
                                  struct AbtTriple *triple);

// Witness JSON of the coloring.
//
// # Safety
// `h` must be a live coloring handle and `json` writable.
enum AbtError abt_coloring_json(const struct AbtColoring *h, char **json);

// JSON of every applicable two-color bound for `(a, b)`.
//
// # Safety
// `json` must be writable.
enum AbtError abt_bounds_json(uint64_t a, uint64_t b, char **json);

// DIMACS CNF stating that `[1, n]` has a valid `r`-coloring.
//
// # Safety
// `dimacs` must be writable.
enum AbtError abt_encode_dimacs(uint64_t a, uint64_t b, uint64_t r, uint64_t n, char **dimacs);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ABTRIPLE_H */
