#ifndef GWPROD_H
#define GWPROD_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GwpStatus {
  GWP_STATUS_OK = 0,
  GWP_STATUS_NULL_POINTER = 1,
  GWP_STATUS_INVALID_UTF8 = 2,
  GWP_STATUS_INVALID_INPUT = 3,
  GWP_STATUS_UNSTABLE = 4,
  GWP_STATUS_OUT_OF_RANGE = 5,
  GWP_STATUS_UNSUPPORTED = 6,
  GWP_STATUS_INCONSISTENT = 7,
  GWP_STATUS_PANIC = 8,
} GwpStatus;

/**
 * Opaque marked graph.
 */
typedef struct GwpGraph GwpGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next `gwp_*` call on this thread.
 */
const char *gwp_last_error(void);

/**
 * # Safety
 * `s` is null or a string returned by this library, not yet freed.
 */
void gwp_string_free(char *s);

/**
 * Parses a graph from its JSON encoding.
 *
 * # Safety
 * `json` is a NUL-terminated string; `out` is writable.
 */
enum GwpStatus gwp_graph_from_json(const char *json, struct GwpGraph **out);

/**
 * # Safety
 * `g` is null or a graph from this library, not yet freed.
 */
void gwp_graph_free(struct GwpGraph *g);

/**
 * # Safety
 * `g` is a live graph; `out` is writable.
 */
enum GwpStatus gwp_graph_to_json(const struct GwpGraph *g, char **out);

/**
 * Canonical form as JSON, and the order of the automorphism group.
 *
 * # Safety
 * `g` is a live graph; `out` and `automorphisms` are writable.
 */
enum GwpStatus gwp_graph_canonical(const struct GwpGraph *g, char **out, uint64_t *automorphisms);

/**
 * # Safety
 * `g` is a live graph; `out` is writable.
 */
enum GwpStatus gwp_graph_is_stable(const struct GwpGraph *g, bool *out);

/**
 * Pushes the marking along a monoid map and stabilizes. `map` is
 * `"identity"`, `"zero"` or the JSON encoding of a map.
 *
 * # Safety
 * `g` is a live graph; `map` is a NUL-terminated string; `out` is writable.
 */
enum GwpStatus gwp_graph_stabilize(const struct GwpGraph *g,
                                   const char *map,
                                   struct GwpGraph **out);

/**
 * Checks the product formula for bidegree `(d1, d2)`. `equal` receives the
 * outcome and `report` the JSON report.
 *
 * # Safety
 * `equal` and `report` are writable.
 */
enum GwpStatus gwp_verify_product(uint32_t d1,
                                  uint32_t d2,
                                  size_t cap_n,
                                  bool *equal,
                                  char **report);

/**
 * Genus-0 count through the expected number of points, as `"p/q"`.
 * `target` is `"p2"` or `"p1xp1"`.
 *
 * # Safety
 * `target` is a NUL-terminated string; `degree` points to `len` values;
 * `out` is writable.
 */
enum GwpStatus gwp_wdvv_number(const char *target, const uint64_t *degree, size_t len, char **out);

/**
 * `∫` of a monomial over `M̄_{0,n}`, as `"p/q"`. The monomial is a JSON
 * list of factors such as `["1,2", "psi3"]`.
 *
 * # Safety
 * `monomial` is a NUL-terminated string; `out` is writable.
 */
enum GwpStatus gwp_mbar_evaluate(size_t n, const char *monomial, char **out);

/**
 * # Safety
 * `gamma` and `eps` point to `len` values each; `out` is writable.
 */
enum GwpStatus gwp_kunneth_sign(const int64_t *gamma, const int64_t *eps, size_t len, int32_t *out);

/**
 * Null-terminated version string with static lifetime.
 */
const char *gwp_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GWPROD_H */
