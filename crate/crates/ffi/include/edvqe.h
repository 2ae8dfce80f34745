#ifndef EDVQE_H
#define EDVQE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EdvqeFamily {
  EDVQE_FAMILY_COMPLETE = 0,
  EDVQE_FAMILY_CLUSTER = 1,
  EDVQE_FAMILY_REGULAR3 = 2,
} EdvqeFamily;

typedef enum EdvqeStatus {
  EDVQE_STATUS_OK = 0,
  EDVQE_STATUS_NULL_POINTER = 1,
  EDVQE_STATUS_INVALID_ARGUMENT = 2,
  EDVQE_STATUS_DIMENSION = 3,
  EDVQE_STATUS_CAPACITY = 4,
  EDVQE_STATUS_NUMERIC = 5,
  EDVQE_STATUS_IO = 6,
  EDVQE_STATUS_PARSE = 7,
  EDVQE_STATUS_PANIC = 8,
} EdvqeStatus;

/**
 * Weighted undirected graph.
 */
typedef struct EdvqeGraph EdvqeGraph;

/**
 * Outcome of [`edvqe_solve`] or [`edvqe_warm_start`].
 */
typedef struct EdvqeSolveResult EdvqeSolveResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *edvqe_last_error_message(void);

/**
 * Builds a graph from parallel edge arrays.
 *
 * # Safety
 * `i`, `j` and `w` must each point to `n_edges` readable elements (or may be
 * null when `n_edges` is 0); `out` must be writable.
 */
enum EdvqeStatus edvqe_graph_new(size_t n_vertices,
                                 const uint32_t *i,
                                 const uint32_t *j,
                                 const double *w,
                                 size_t n_edges,
                                 struct EdvqeGraph **out);

/**
 * Reads an edge-list file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum EdvqeStatus edvqe_graph_read(const char *path, struct EdvqeGraph **out);

/**
 * Benchmark family instance with default weights.
 *
 * # Safety
 * `out` must be writable.
 */
enum EdvqeStatus edvqe_graph_generate(enum EdvqeFamily family,
                                      size_t n_vertices,
                                      uint64_t seed,
                                      struct EdvqeGraph **out);

/**
 * # Safety
 * `graph` must be null or a handle from this library not yet freed.
 */
void edvqe_graph_free(struct EdvqeGraph *graph);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t edvqe_graph_n_vertices(const struct EdvqeGraph *graph);

/**
 * Edge count, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t edvqe_graph_n_edges(const struct EdvqeGraph *graph);

/**
 * Cut weight of a 0/1 assignment.
 *
 * # Safety
 * `bits` must point to `len` readable bytes; `out` must be writable.
 */
enum EdvqeStatus edvqe_cut_value(const struct EdvqeGraph *graph,
                                 const uint8_t *bits,
                                 size_t len,
                                 double *out);

/**
 * Full EDVQE pipeline. `config_json` may be null for defaults.
 *
 * # Safety
 * `graph` must be a live handle, `config_json` null or NUL-terminated, and
 * `out` writable.
 */
enum EdvqeStatus edvqe_solve(const struct EdvqeGraph *graph,
                             const char *config_json,
                             uint64_t seed,
                             struct EdvqeSolveResult **out);

/**
 * Refinement loop from a given 0/1 assignment.
 *
 * # Safety
 * As [`edvqe_solve`]; `bits` must point to `len` readable bytes.
 */
enum EdvqeStatus edvqe_warm_start(const struct EdvqeGraph *graph,
                                  const uint8_t *bits,
                                  size_t len,
                                  const char *config_json,
                                  uint64_t seed,
                                  struct EdvqeSolveResult **out);

/**
 * # Safety
 * `result` must be null or a live handle.
 */
void edvqe_result_free(struct EdvqeSolveResult *result);

/**
 * Best cut found.
 *
 * # Safety
 * `result` must be a live handle and `out` writable.
 */
enum EdvqeStatus edvqe_result_best_cut(const struct EdvqeSolveResult *result, double *out);

/**
 * Cut of the starting assignment.
 *
 * # Safety
 * `result` must be a live handle and `out` writable.
 */
enum EdvqeStatus edvqe_result_initial_cut(const struct EdvqeSolveResult *result, double *out);

/**
 * Copies the best assignment; `len` must equal the vertex count.
 *
 * # Safety
 * `result` must be a live handle and `out` point to `len` writable bytes.
 */
enum EdvqeStatus edvqe_result_bits(const struct EdvqeSolveResult *result, uint8_t *out, size_t len);

/**
 * Full result as JSON; release with [`edvqe_string_free`].
 *
 * # Safety
 * `result` must be a live handle and `out` writable.
 */
enum EdvqeStatus edvqe_result_to_json(const struct EdvqeSolveResult *result, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void edvqe_string_free(char *s);

/**
 * Best cut over `runs` GW runs with `projections` roundings each.
 * `bits_out` may be null; otherwise it receives `len` (= vertex count)
 * bytes.
 *
 * # Safety
 * `graph` must be a live handle, `best_cut` writable, `bits_out` null or
 * `len` writable bytes.
 */
enum EdvqeStatus edvqe_gw(const struct EdvqeGraph *graph,
                          size_t projections,
                          size_t runs,
                          uint64_t seed,
                          double *best_cut,
                          uint8_t *bits_out,
                          size_t len);

/**
 * Exact maximum cut by enumeration (small graphs only).
 *
 * # Safety
 * As [`edvqe_gw`].
 */
enum EdvqeStatus edvqe_brute_force(const struct EdvqeGraph *graph,
                                   double *best_cut,
                                   uint8_t *bits_out,
                                   size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EDVQE_H */
