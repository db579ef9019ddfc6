#ifndef QSEARCH_H
#define QSEARCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QsStatus {
  QS_STATUS_OK = 0,
  QS_STATUS_NULL_POINTER = 1,
  QS_STATUS_INVALID_ARGUMENT = 2,
  QS_STATUS_INFEASIBLE = 3,
  QS_STATUS_CONSISTENCY = 4,
  QS_STATUS_BUFFER_TOO_SMALL = 5,
  QS_STATUS_PANIC = 6,
} QsStatus;

typedef struct QsLattice QsLattice;

typedef struct QsSearchResult QsSearchResult;

typedef struct QsWalk QsWalk;

typedef struct QsSearchSummary {
  double tau;
  size_t t2_star;
  double p_max;
  double effective_queries;
  size_t walk_steps_total;
  bool budget_limited;
  size_t curve_len;
} QsSearchSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` as a
 * NUL-terminated string and returns the full message length (excluding
 * the terminator). Returns 0 when there is no error. Pass a null `buf` to
 * query the length.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t qs_last_error(char *buf, size_t len);

/**
 * Largest state dimension a lattice handle may have. Defaults to 2^22.
 */
void qs_set_max_n(size_t max_n);

size_t qs_max_n(void);

/**
 * Success probability after `queries` Grover iterations with `marked`
 * of `size` items marked.
 *
 * # Safety
 * `out_p` must be a valid pointer.
 */
enum QsStatus qs_grover_success_probability(size_t size,
                                            size_t marked,
                                            size_t queries,
                                            double *out_p);

/**
 * Query count maximizing the success probability, and that probability.
 *
 * # Safety
 * `out_q` and `out_p` must be valid pointers.
 */
enum QsStatus qs_grover_optimal_queries(size_t size, size_t marked, size_t *out_q, double *out_p);

/**
 * Runs `queries` iterations by state-vector simulation and writes the
 * success probability after each, starting at 0, into `trace`
 * (`queries + 1` entries).
 *
 * # Safety
 * `marked` must point to `marked_len` indices and `trace` to `trace_len`
 * writable doubles.
 */
enum QsStatus qs_grover_run(size_t size,
                            const size_t *marked,
                            size_t marked_len,
                            size_t queries,
                            double *trace,
                            size_t trace_len);

/**
 * Creates a periodic lattice of `side^dim` vertices.
 *
 * # Safety
 * `out_lattice` must be a valid pointer.
 */
enum QsStatus qs_lattice_new(size_t dim, size_t side, struct QsLattice **out_lattice);

/**
 * # Safety
 * `lattice` must be null or a handle from [`qs_lattice_new`] not yet freed.
 */
void qs_lattice_free(struct QsLattice *lattice);

/**
 * # Safety
 * `lattice` must be a live handle and `out_size` a valid pointer.
 */
enum QsStatus qs_lattice_size(const struct QsLattice *lattice, size_t *out_size);

/**
 * Creates the walk step `W^t1` at hop angle `tau`. A NaN `tau` tunes it.
 *
 * # Safety
 * `lattice` must be a live handle and `out_walk` a valid pointer.
 */
enum QsStatus qs_walk_new(const struct QsLattice *lattice,
                          double tau,
                          size_t t1,
                          struct QsWalk **out_walk);

/**
 * # Safety
 * `walk` must be null or a handle from [`qs_walk_new`] not yet freed.
 */
void qs_walk_free(struct QsWalk *walk);

/**
 * # Safety
 * `walk` must be a live handle and `out_tau` a valid pointer.
 */
enum QsStatus qs_walk_tau(const struct QsWalk *walk, double *out_tau);

/**
 * Applies `W^t1` in place to a state of `2 * N` doubles stored as
 * interleaved (re, im) pairs.
 *
 * # Safety
 * `walk` must be a live handle and `amps` must point to `len` doubles.
 */
enum QsStatus qs_walk_apply(const struct QsWalk *walk, double *amps, size_t len);

/**
 * Runs spatial search for the vertex at index 0.
 *
 * `tau` NaN tunes the hop angle; `cos_delta` NaN runs without the
 * ancilla regulator; `t2_max` 0 uses the default query budget.
 *
 * # Safety
 * `lattice` must be a live handle and `out_result` a valid pointer.
 */
enum QsStatus qs_search_run(const struct QsLattice *lattice,
                            size_t t1,
                            double tau,
                            double cos_delta,
                            size_t t2_max,
                            struct QsSearchResult **out_result);

/**
 * # Safety
 * `result` must be null or a handle from [`qs_search_run`] not yet freed.
 */
void qs_search_result_free(struct QsSearchResult *result);

/**
 * # Safety
 * `result` must be a live handle and `out_summary` a valid pointer.
 */
enum QsStatus qs_search_result_summary(const struct QsSearchResult *result,
                                       struct QsSearchSummary *out_summary);

/**
 * Copies the probability curve (index = query count) into `buf`.
 *
 * # Safety
 * `result` must be a live handle and `buf` must point to `len` doubles.
 */
enum QsStatus qs_search_result_curve(const struct QsSearchResult *result, double *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSEARCH_H */
