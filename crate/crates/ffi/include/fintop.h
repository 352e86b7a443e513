#ifndef FINTOP_H
#define FINTOP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FintopStatus {
  FINTOP_STATUS_OK = 0,
  FINTOP_STATUS_NULL_POINTER = 1,
  FINTOP_STATUS_INVALID_PARAMETER = 2,
  FINTOP_STATUS_PARSE = 3,
  FINTOP_STATUS_CYCLE_DETECTED = 4,
  FINTOP_STATUS_NOT_ORDER_PRESERVING = 5,
  FINTOP_STATUS_MISMATCHED_SPACES = 6,
  FINTOP_STATUS_NOT_OPEN = 7,
  FINTOP_STATUS_BUDGET_EXCEEDED = 8,
  FINTOP_STATUS_NOT_APPLICABLE = 9,
  FINTOP_STATUS_IO = 10,
  FINTOP_STATUS_INTERNAL = 11,
} FintopStatus;

// Outcome of a homotopy question.
typedef enum FintopVerdict {
  FINTOP_VERDICT_HOMOTOPIC = 0,
  FINTOP_VERDICT_NOT_HOMOTOPIC = 1,
  FINTOP_VERDICT_UNKNOWN = 2,
} FintopVerdict;

// A finite T0-space.
typedef struct FintopSpace FintopSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or NULL. The pointer stays
// valid until the next failing call on the same thread.
const char *fintop_last_error(void);

// The Khalimsky circle on `2n` points.
//
// # Safety
// `out` must be a valid pointer.
enum FintopStatus fintop_space_circle(size_t n, struct FintopSpace **out);

// The Khalimsky interval `[k, l]`.
//
// # Safety
// `out` must be a valid pointer.
enum FintopStatus fintop_space_interval(int64_t k, int64_t l, struct FintopSpace **out);

// Parses the line-oriented space format.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum FintopStatus fintop_space_parse(const char *text, struct FintopSpace **out);

// The product space `a × b`; point `(i, j)` has id `i * |b| + j`.
//
// # Safety
// `a` and `b` must be live handles and `out` a valid pointer.
enum FintopStatus fintop_space_product(const struct FintopSpace *a,
                                       const struct FintopSpace *b,
                                       struct FintopSpace **out);

// Number of points, or 0 for NULL.
//
// # Safety
// `space` must be NULL or a live handle.
size_t fintop_space_len(const struct FintopSpace *space);

// Whether `x <= y`; false for NULL or out of range ids.
//
// # Safety
// `space` must be NULL or a live handle.
bool fintop_space_le(const struct FintopSpace *space, size_t x, size_t y);

// Releases a handle. NULL is ignored.
//
// # Safety
// `space` must be NULL or a handle not yet freed.
void fintop_space_free(struct FintopSpace *space);

// Size of a core of the space.
//
// # Safety
// `space` must be a live handle and `out` a valid pointer.
enum FintopStatus fintop_core_len(const struct FintopSpace *space, size_t *out);

// Degree of the circle map `Z/2m -> Z/2n` with the given `2m` values.
//
// # Safety
// `values` must point to `2m` entries and `out` be a valid pointer.
enum FintopStatus fintop_circle_degree(size_t m, size_t n, const size_t *values, int64_t *out);

// Whether two circle maps `Z/2m -> Z/2n` are homotopic.
//
// # Safety
// `f` and `g` must point to `2m` entries and `out` be a valid pointer.
enum FintopStatus fintop_circle_homotopic(size_t m,
                                          size_t n,
                                          const size_t *f,
                                          const size_t *g,
                                          bool *out);

// Decides whether two maps given by value tables of length
// `|source|` are homotopic.
//
// # Safety
// Handles must be live, `f` and `g` must point to `|source|` entries and
// `out` must be a valid pointer.
enum FintopStatus fintop_homotopic(const struct FintopSpace *source,
                                   const struct FintopSpace *target,
                                   const size_t *f,
                                   const size_t *g,
                                   size_t budget,
                                   enum FintopVerdict *out);

// Exact topological complexity. Writes the proven lower bound and the
// certified upper bound (-1 when none was found up to `limit`).
//
// # Safety
// `space` must be a live handle and the out-pointers valid.
enum FintopStatus fintop_tc_exact(const struct FintopSpace *space,
                                  size_t limit,
                                  size_t *lower,
                                  ptrdiff_t *upper);

// Exact LS-category, reported like `fintop_tc_exact`.
//
// # Safety
// `space` must be a live handle and the out-pointers valid.
enum FintopStatus fintop_cat_exact(const struct FintopSpace *space,
                                   size_t limit,
                                   size_t *lower,
                                   ptrdiff_t *upper);

// Runs every check on the explicit two-piece cover of `S^1_k × S^1_k`.
//
// # Safety
// `passed` must be a valid pointer.
enum FintopStatus fintop_verify_witness(size_t k, bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FINTOP_H */
