/* C interface to the hamcount library. Generated by cbindgen; do not edit. */

#ifndef HAMCOUNT_H
#define HAMCOUNT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum HamStatus {
  HamOk = 0,
  /**
   * A required pointer argument was null.
   */
  HamErrNullArgument = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  HamErrUtf8 = 2,
  /**
   * The input file could not be read or parsed.
   */
  HamErrParse = 3,
  /**
   * A parameter was outside its documented domain.
   */
  HamErrDomain = 4,
  /**
   * Matrix scaling failed to converge.
   */
  HamErrScaling = 5,
  /**
   * An exact oracle was asked for an order above its cap.
   */
  HamErrCapExceeded = 6,
  /**
   * The trial budget ran out before the requested output was produced.
   */
  HamErrBudgetExhausted = 7,
  /**
   * Internal failure (panic or invariant breach); see last_error.
   */
  HamErrInternal = 8,
} HamStatus;

/**
 * Opaque digraph handle.
 */
typedef struct HamGraph HamGraph;

/**
 * Flat copy of an estimate report.
 */
typedef struct HamEstimate {
  uint32_t n;
  double alpha;
  double epsilon;
  double delta;
  uint64_t seed;
  /**
   * 0 = fixed budget, 1 = adaptive.
   */
  uint8_t adaptive;
  uint64_t trials;
  uint64_t acceptances;
  double log_br_c;
  double log_l;
  /**
   * -inf when no trial accepted.
   */
  double log_estimate;
  /**
   * exp(log_estimate); +inf when it overflows, 0 when s = 0.
   */
  double estimate;
  uint64_t clamp_events;
  uint64_t scaling_iters;
  uint64_t wall_ms;
} HamEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *hamcount_version(void);

/**
 * Message for the most recent error on this thread, or null if none.
 * The pointer stays valid until the next failing call on the thread.
 */
const char *hamcount_last_error(void);

/**
 * Build a graph from parallel edge arrays (1-based vertices, positive
 * weights). Pass `weights == null` for an unweighted graph.
 *
 * # Safety
 * `tails` and `heads` (and `weights` when non-null) must point to at least
 * `edge_count` readable elements; `out` must be a valid pointer.
 */
enum HamStatus hamcount_graph_from_edges(uint32_t n,
                                         const uint32_t *tails,
                                         const uint32_t *heads,
                                         const double *weights,
                                         uintptr_t edge_count,
                                         struct HamGraph **out);

/**
 * Read a digraph file in the text format of the CLI.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HamStatus hamcount_graph_read(const char *path, struct HamGraph **out);

/**
 * Generate a random digraph whose every vertex keeps in- and outdegree at
 * least ceil(alpha * n); deterministic per seed.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum HamStatus hamcount_graph_gen_dense(uint32_t n,
                                        double alpha,
                                        uint64_t seed,
                                        struct HamGraph **out);

/**
 * Release a graph handle. Null is a no-op.
 *
 * # Safety
 * `g` must have been returned by one of the constructors and not freed yet.
 */
void hamcount_graph_free(struct HamGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle.
 */
uint32_t hamcount_graph_order(const struct HamGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle.
 */
uint64_t hamcount_graph_edge_count(const struct HamGraph *g);

/**
 * Density ratio alpha = (minimum of in/out degrees over vertices) / n.
 *
 * # Safety
 * `g` must be a live graph handle.
 */
double hamcount_graph_alpha(const struct HamGraph *g);

/**
 * Exact log of the total Hamiltonian cycle weight (subset DP). `cap` = 0
 * uses the default order cap.
 *
 * # Safety
 * `g` must be a live graph handle, `out_log` a valid pointer.
 */
enum HamStatus hamcount_exact_hamilton(const struct HamGraph *g, uintptr_t cap, double *out_log);

/**
 * Exact log of the permanent (Gray-code inclusion-exclusion). `cap` = 0
 * uses the default order cap.
 *
 * # Safety
 * `g` must be a live graph handle, `out_log` a valid pointer.
 */
enum HamStatus hamcount_exact_permanent(const struct HamGraph *g, uintptr_t cap, double *out_log);

/**
 * Run the acceptance/rejection estimator. `adaptive != 0` runs until
 * `target_acceptances` acceptances (0 picks the Chernoff default for
 * epsilon/delta); otherwise `n_budget` scales the fixed Chernoff budget
 * (0 picks the density heuristic). Results land in `*out`.
 *
 * # Safety
 * `g` must be a live graph handle, `out` a valid pointer.
 */
enum HamStatus hamcount_estimate(const struct HamGraph *g,
                                 double epsilon,
                                 double delta,
                                 uint8_t adaptive,
                                 double n_budget,
                                 uint64_t target_acceptances,
                                 uint64_t seed,
                                 uint64_t max_trials,
                                 uint32_t threads,
                                 struct HamEstimate *out);

/**
 * Draw Hamiltonian cycles proportionally to their weight. Writes up to
 * `count` cycles into `out_vertices`, each as n+1 vertices (1, ..., 1);
 * the buffer must hold `count * (n + 1)` elements. `*out_found` reports
 * how many cycles were written. Returns `HamErrBudgetExhausted` when
 * `max_trials` ran out first (the cycles found so far are still written).
 *
 * # Safety
 * `g` must be a live graph handle; `out_vertices` must point to at least
 * `count * (order + 1)` writable elements; `out_found` must be valid.
 */
enum HamStatus hamcount_sample(const struct HamGraph *g,
                               uint64_t count,
                               double epsilon,
                               uint64_t seed,
                               uint64_t max_trials,
                               uint32_t threads,
                               uint32_t *out_vertices,
                               uint64_t *out_found);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HAMCOUNT_H */
