#ifndef PPTOP_H
#define PPTOP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Outcome of a call. Negative answers (no homomorphism, condition fails)
 * are reported through out-parameters, not as errors.
 */
typedef enum PptStatus {
  PPT_STATUS_OK = 0,
  PPT_STATUS_NULL_POINTER = 1,
  /**
   * Malformed text, out-of-range values, or an input the operation rejects.
   */
  PPT_STATUS_INVALID_INPUT = 2,
  /**
   * A search node limit or size budget was hit; the answer is unknown.
   */
  PPT_STATUS_RESOURCE_LIMIT = 3,
  PPT_STATUS_INTERNAL = 4,
  PPT_STATUS_PANIC = 5,
} PptStatus;

/**
 * Opaque digraph handle.
 */
typedef struct PptDigraph PptDigraph;

/**
 * Resource limits; a zero field keeps the library default.
 */
typedef struct PptLimits {
  uint64_t node_limit;
  size_t vertex_budget;
  size_t edge_budget;
} PptLimits;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call on the same thread.
 */
const char *ppt_last_error(void);

/**
 * Builds a digraph on `n` vertices from `edge_count` pairs stored flat in
 * `edges` (`u0, v0, u1, v1, ...`). `edges` may be null when `edge_count` is 0.
 *
 * # Safety
 * `edges` must point to `2 * edge_count` readable values; `out` must be writable.
 */
enum PptStatus ppt_digraph_new(size_t n,
                               const size_t *edges,
                               size_t edge_count,
                               struct PptDigraph **out);

/**
 * Parses JSON (`{"n":..,"edges":..}`) or an edge list; JSON is recognised
 * by a leading `{`.
 *
 * # Safety
 * `text_in` must be a nul-terminated string; `out` must be writable.
 */
enum PptStatus ppt_digraph_parse(const char *text_in, struct PptDigraph **out);

/**
 * `family` is one of `cycle`, `path`, `tournament`, `clique`.
 *
 * # Safety
 * `family` must be a nul-terminated string; `out` must be writable.
 */
enum PptStatus ppt_digraph_family(const char *family, size_t k, struct PptDigraph **out);

/**
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void ppt_digraph_free(struct PptDigraph *g);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t ppt_digraph_vertex_count(const struct PptDigraph *g);

/**
 * Number of edges, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t ppt_digraph_edge_count(const struct PptDigraph *g);

/**
 * JSON encoding of `g`; free the result with `ppt_string_free`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum PptStatus ppt_digraph_to_json(const struct PptDigraph *g, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ppt_string_free(char *s);

/**
 * Searches for a homomorphism `g -> h`. On success `*found` tells whether
 * one exists and, if so, `map_out[0..n(g)]` holds it.
 *
 * # Safety
 * `map_out` must have room for `n(g)` values; `limits` may be null.
 */
enum PptStatus ppt_find_hom(const struct PptDigraph *g,
                            const struct PptDigraph *h,
                            const struct PptLimits *limits_in,
                            size_t *map_out,
                            bool *found);

/**
 * The core of `g` as a new handle, re-indexed densely.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable; `limits` may be null.
 */
enum PptStatus ppt_core(const struct PptDigraph *g,
                        const struct PptLimits *limits_in,
                        struct PptDigraph **out);

/**
 * Decides whether the polymorphisms of `g` satisfy `condition`, either a
 * builtin name (`cyclic:5`, `maltsev`, `constant`, `fourfold`) or identities
 * such as `f(x,x,y)=f(y,x,x)`.
 *
 * # Safety
 * `condition` must be a nul-terminated string; `limits` may be null.
 */
enum PptStatus ppt_check_condition(const struct PptDigraph *g,
                                   const char *condition,
                                   const struct PptLimits *limits_in,
                                   bool *satisfied);

/**
 * Whether `g` is totally rectangular (has an idempotent Maltsev
 * polymorphism).
 *
 * # Safety
 * `g` must be a live handle.
 */
enum PptStatus ppt_has_maltsev(const struct PptDigraph *g, bool *result);

/**
 * Full classification as JSON; free the result with `ppt_string_free`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable; `limits` may be null.
 */
enum PptStatus ppt_classify_json(const struct PptDigraph *g,
                                 const struct PptLimits *limits_in,
                                 char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PPTOP_H */
