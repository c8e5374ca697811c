#ifndef TOPOHELLY_H
#define TOPOHELLY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ThStatus {
  TH_STATUS_OK = 0,
  /**
   * A checked statement is false (the report says which).
   */
  TH_STATUS_VERDICT_FAILURE = 1,
  TH_STATUS_PARSE_ERROR = 2,
  TH_STATUS_RESOURCE_LIMIT = 3,
  TH_STATUS_NULL_POINTER = 4,
  TH_STATUS_INVALID_UTF8 = 5,
  /**
   * The theorem's hypothesis does not hold; nothing was checked.
   */
  TH_STATUS_HYPOTHESIS_FAILURE = 6,
  TH_STATUS_USAGE_ERROR = 7,
  TH_STATUS_INTERNAL = 8,
} ThStatus;

/**
 * Opaque family handle.
 */
typedef struct ThFamily ThFamily;

/**
 * Enumeration limits, mirroring the library defaults.
 */
typedef struct ThCaps {
  size_t max_members;
  size_t max_vertices;
  size_t max_intersections;
  size_t max_cells;
  size_t max_total_rank;
  size_t max_extent;
  size_t max_search_nodes;
} ThCaps;

/**
 * Parameters of `th_report`. Unused fields are ignored.
 */
typedef struct ThParams {
  size_t k;
  /**
   * For `spectral`: whether `k` is set.
   */
  bool has_k;
  size_t p;
  size_t q;
  /**
   * 0 for the rationals or a prime; `homology` ignores it unless
   * `has_field` is set.
   */
  uint64_t field;
  bool has_field;
} ThParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

struct ThCaps th_caps_default(void);

/**
 * k = 0, p = q = 1, rational coefficients, nothing optional set.
 */
struct ThParams th_params_default(void);

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call on the same thread.
 */
const char *th_last_error(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void th_string_free(char *s);

/**
 * Parses a family document. `caps` may be NULL for the defaults.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `caps` NULL or valid; `out` a
 * valid pointer. On success `*out` owns a handle for `th_family_free`.
 */
enum ThStatus th_family_from_json(const char *json,
                                  const struct ThCaps *caps,
                                  struct ThFamily **out_family);

/**
 * # Safety
 * `f` must be NULL or a handle from `th_family_from_json` not yet freed.
 */
void th_family_free(struct ThFamily *f);

/**
 * # Safety
 * `f` must be a live handle and `out_len` a valid pointer.
 */
enum ThStatus th_family_len(const struct ThFamily *f, size_t *out_len);

/**
 * Largest number of members sharing one cell.
 *
 * # Safety
 * `f` must be a live handle and `out_depth` a valid pointer.
 */
enum ThStatus th_intersection_depth(const struct ThFamily *f, size_t *out_depth);

/**
 * Whether the family is (k-|G|)-acyclic.
 *
 * # Safety
 * `f` must be a live handle and `out_verdict` a valid pointer.
 */
enum ThStatus th_is_k_acyclic(const struct ThFamily *f, size_t k, bool *out_verdict);

/**
 * Leray number of the nerve.
 *
 * # Safety
 * `f` must be a live handle and `out_leray` a valid pointer.
 */
enum ThStatus th_leray_number(const struct ThFamily *f, size_t *out_leray);

/**
 * Exact transversal number.
 *
 * # Safety
 * `f` must be a live handle and `out_tau` a valid pointer.
 */
enum ThStatus th_transversal_number(const struct ThFamily *f, size_t *out_tau);

/**
 * Fraction of (k+1)-subsets with non-empty intersection, in lowest terms.
 *
 * # Safety
 * `f` must be a live handle; `out_num` and `out_den` valid pointers.
 */
enum ThStatus th_alpha(const struct ThFamily *f, size_t k, uint64_t *out_num, uint64_t *out_den);

/**
 * Runs one report command (`homology`, `nerve`, `leray`, `acyclic`, `fh`,
 * `pq`, `spectral`, `nervethm`) and writes the JSON report to `*out_json`
 * (free with `th_string_free`). The return value is the report's status,
 * so a false verdict yields `VerdictFailure` with the report still set.
 *
 * # Safety
 * `f` must be a live handle, `command` a NUL-terminated string, `params`
 * NULL or valid, `out_json` a valid pointer.
 */
enum ThStatus th_report(const struct ThFamily *f,
                        const char *command,
                        const struct ThParams *params,
                        char **out_json);

/**
 * Library version as a static string.
 */
const char *th_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TOPOHELLY_H */
