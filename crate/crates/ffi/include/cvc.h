#ifndef CVC_H
#define CVC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CvcAlgo {
  /**
   * Subset enumeration, up to 20 vertices.
   */
  CVC_ALGO_ORACLE = 0,
  /**
   * Cutwidth DP along a heuristic arrangement.
   */
  CVC_ALGO_CUTDP = 1,
  /**
   * Vertex-integrity algorithm with a computed modulator.
   */
  CVC_ALGO_VI = 2,
  /**
   * Feedback-edge-set branching, up to 22 extra edges.
   */
  CVC_ALGO_FES = 3,
  /**
   * Budgeted search; only valid for [`cvc_decide`].
   */
  CVC_ALGO_PRUNED = 4,
} CvcAlgo;

typedef enum CvcReduction {
  /**
   * Set multicover file.
   */
  CVC_REDUCTION_SMC = 0,
  /**
   * DIMACS exactly-one formula, greedy grouping and families.
   */
  CVC_REDUCTION_SAT_NATURAL = 1,
  /**
   * DIMACS exactly-one formula, clique-width construction.
   */
  CVC_REDUCTION_SAT_CW = 2,
  /**
   * Multicolored clique file.
   */
  CVC_REDUCTION_MCC_TD = 3,
} CvcReduction;

typedef enum CvcStatus {
  /**
   * Success, or "yes" for decisions and checks.
   */
  CVC_STATUS_OK = 0,
  /**
   * Infeasible, over budget, or a failed check.
   */
  CVC_STATUS_NO = 1,
  CVC_STATUS_NULL_ARGUMENT = 2,
  CVC_STATUS_PARSE = 3,
  CVC_STATUS_STRUCTURAL = 4,
  CVC_STATUS_CAP_EXCEEDED = 5,
  CVC_STATUS_CONFIG = 6,
  CVC_STATUS_IO = 7,
  /**
   * A string argument is not valid UTF-8.
   */
  CVC_STATUS_UTF8 = 8,
  /**
   * A bug inside the library.
   */
  CVC_STATUS_PANIC = 9,
} CvcStatus;

/**
 * Opaque capacitated graph, optionally carrying a budget.
 */
typedef struct CvcGraph CvcGraph;

/**
 * Message of the last failing call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *cvc_last_error(void);

/**
 * Static, NUL-terminated version string.
 */
const char *cvc_version(void);

/**
 * Builds a graph from `n` capacities and `m` edges given as `2m` endpoint
 * ids.
 *
 * # Safety
 * `capacity` must point to `n` values and `edges` to `2 * m` values (either
 * may be null when its length is 0); `out` must be writable.
 */
enum CvcStatus cvc_graph_new(size_t n,
                             const size_t *capacity,
                             size_t m,
                             const size_t *edges,
                             struct CvcGraph **out);

/**
 * Parses the `cvc <n> <m> [<k>]` text format.
 *
 * # Safety
 * `text_in` must be a NUL-terminated string and `out` writable.
 */
enum CvcStatus cvc_graph_parse(const char *text_in, struct CvcGraph **out);

/**
 * Writes the graph in the text format. Free the string with
 * [`cvc_string_free`].
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum CvcStatus cvc_graph_write(const struct CvcGraph *g, char **out);

/**
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void cvc_graph_free(struct CvcGraph *g);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void cvc_string_free(char *s);

/**
 * Vertex count; 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t cvc_graph_vertex_count(const struct CvcGraph *g);

/**
 * Edge count; 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t cvc_graph_edge_count(const struct CvcGraph *g);

/**
 * Stores the budget in `out`; `No` when the graph carries none.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum CvcStatus cvc_graph_budget(const struct CvcGraph *g, size_t *out);

/**
 * Minimum size of a feasible orientation. Returns `No` when none exists.
 * On `Ok`, `size_out` receives the size and `heads_out` (length `m`, may
 * be null) the head of every edge.
 *
 * # Safety
 * `g` must be a live handle, `size_out` writable, `heads_out` null or
 * writable for `m` values, and `algo` a declared [`CvcAlgo`] value.
 */
enum CvcStatus cvc_solve(const struct CvcGraph *g,
                         enum CvcAlgo algo,
                         size_t *size_out,
                         size_t *heads_out);

/**
 * Whether a feasible orientation of size at most `k` exists; `heads_out`
 * (length `m`, may be null) receives one on `Ok`.
 *
 * # Safety
 * `g` must be a live handle, `heads_out` null or writable for `m` values,
 * and `algo` a declared [`CvcAlgo`] value.
 */
enum CvcStatus cvc_decide(const struct CvcGraph *g, size_t k, enum CvcAlgo algo, size_t *heads_out);

/**
 * Checks the orientation given by one head per edge. `Ok` when every
 * capacity holds, `No` otherwise; a head that is not an endpoint of its
 * edge is a `Structural` error. `size_out` (may be null) receives the size.
 *
 * # Safety
 * `g` must be a live handle, `heads` must point to `m` values (or be null
 * when `m` is 0), and `size_out` must be null or writable.
 */
enum CvcStatus cvc_verify(const struct CvcGraph *g, const size_t *heads, size_t *size_out);

/**
 * Reduces a source instance given as text; the result carries its budget
 * (see [`cvc_graph_budget`]).
 *
 * # Safety
 * `text_in` must be a NUL-terminated string, `out` writable, and `kind` a
 * declared [`CvcReduction`] value.
 */
enum CvcStatus cvc_reduce(enum CvcReduction kind, const char *text_in, struct CvcGraph **out);

#endif  /* CVC_H */
