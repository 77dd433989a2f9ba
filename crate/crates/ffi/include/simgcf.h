#ifndef SIMGCF_H
#define SIMGCF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result of every fallible call.
typedef enum SimgcfStatus {
  SIMGCF_STATUS_OK = 0,
  // A required pointer argument was null.
  SIMGCF_STATUS_NULL_ARGUMENT = 1,
  // Bad parameter, configuration or filter.
  SIMGCF_STATUS_INVALID_ARGUMENT = 2,
  // Unreadable or malformed file, or an index out of range.
  SIMGCF_STATUS_DATA = 3,
  // Rank-deficient fit, non-convergence or a stale model cache.
  SIMGCF_STATUS_NUMERICAL = 4,
  // Caller buffer too small; the required length was written.
  SIMGCF_STATUS_BUFFER_TOO_SMALL = 5,
  // Internal panic caught at the boundary.
  SIMGCF_STATUS_INTERNAL = 6,
} SimgcfStatus;

typedef enum SimgcfBasis {
  SIMGCF_BASIS_MONOMIAL = 0,
  SIMGCF_BASIS_JACOBI = 1,
} SimgcfBasis;

typedef enum SimgcfQuadrant {
  SIMGCF_QUADRANT_I = 1,
  SIMGCF_QUADRANT_II = 2,
  SIMGCF_QUADRANT_III = 3,
  SIMGCF_QUADRANT_IV = 4,
} SimgcfQuadrant;

// Fitted filter.
typedef struct SimgcfFilter SimgcfFilter;

// Normalised user-item adjacency.
typedef struct SimgcfGraph SimgcfGraph;

// Trained embedding model.
typedef struct SimgcfModel SimgcfModel;

// Filter construction parameters. `base_coefficients` is read only for the
// monomial basis, where it holds `degree + 1` values.
typedef struct SimgcfFilterParams {
  enum SimgcfBasis basis;
  size_t degree;
  double jacobi_a;
  double jacobi_b;
  enum SimgcfQuadrant quadrant;
  const double *base_coefficients;
  bool use_scaler;
  double mu;
  double alpha;
  double beta;
  bool space_flip;
  size_t fit_points;
} SimgcfFilterParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *simgcf_version(void);

// Message of the last failed call on this thread, or null if none. Valid
// until the next failing call on this thread.
const char *simgcf_last_error(void);

// Builds the normalised adjacency of `edge_count` user-item pairs.
//
// # Safety
// `edge_users` and `edge_items` point to `edge_count` values; `out` is writable.
enum SimgcfStatus simgcf_graph_from_edges(size_t user_count,
                                          size_t item_count,
                                          const uint32_t *edge_users,
                                          const uint32_t *edge_items,
                                          size_t edge_count,
                                          struct SimgcfGraph **out);

// Builds the train-graph adjacency of a split directory written by `prepare`.
//
// # Safety
// `dir` is a NUL-terminated path; `out` is writable.
enum SimgcfStatus simgcf_graph_from_split_dir(const char *dir, struct SimgcfGraph **out);

// # Safety
// `graph` is a live handle or null.
size_t simgcf_graph_node_count(const struct SimgcfGraph *graph);

// Stored entries of the adjacency (twice the distinct edge count).
//
// # Safety
// `graph` is a live handle or null.
size_t simgcf_graph_nnz(const struct SimgcfGraph *graph);

// # Safety
// `graph` came from this library and is not used afterwards; null is a no-op.
void simgcf_graph_free(struct SimgcfGraph *graph);

// Builds a filter from `params` and fits its monomial coefficients on
// `fit_points` uniform samples of `[-1, 1]`.
//
// # Safety
// `params` is readable, its `base_coefficients` holds `degree + 1` values
// for the monomial basis, and `out` is writable.
enum SimgcfStatus simgcf_filter_fit(const struct SimgcfFilterParams *params,
                                    struct SimgcfFilter **out);

// Loads a filter JSON written by `fit-filter` or `train`, fitting it if it
// carries no propagation coefficients.
//
// # Safety
// `file` is a NUL-terminated path; `out` is writable.
enum SimgcfStatus simgcf_filter_load(const char *file, struct SimgcfFilter **out);

// Copies the propagation coefficients `c₀,…,cₙ` into `out`. `len` receives
// `n + 1` even when `capacity` is too small.
//
// # Safety
// `filter` is a live handle, `out` has room for `capacity` doubles, `len` is writable.
enum SimgcfStatus simgcf_filter_coefficients(const struct SimgcfFilter *filter,
                                             double *out,
                                             size_t capacity,
                                             size_t *len);

// Fitted filter value at `lambda ∈ [-1, 1]`.
//
// # Safety
// `filter` is a live handle and `value` is writable.
enum SimgcfStatus simgcf_filter_value(const struct SimgcfFilter *filter,
                                      double lambda,
                                      double *value);

// # Safety
// `filter` is a live handle or null.
bool simgcf_filter_space_flip(const struct SimgcfFilter *filter);

// # Safety
// `filter` came from this library and is not used afterwards; null is a no-op.
void simgcf_filter_free(struct SimgcfFilter *filter);

// `E = Σ cᵢ Âⁱ E⁰` for row-major `E⁰` of shape `node_count × dim`,
// written row-major to `out` of the same shape.
//
// # Safety
// `e0` and `out` each hold `node_count(graph) * dim` doubles.
enum SimgcfStatus simgcf_propagate(const struct SimgcfGraph *graph,
                                   const struct SimgcfFilter *filter,
                                   const double *e0,
                                   size_t dim,
                                   double *out);

// Loads a `model.bin` checkpoint. The model must be refreshed against a
// graph before scoring.
//
// # Safety
// `file` is a NUL-terminated path; `out` is writable.
enum SimgcfStatus simgcf_model_load(const char *file, struct SimgcfModel **out);

// Recomputes the propagated embeddings on `graph`.
//
// # Safety
// `model` and `graph` are live handles; `model` is not used concurrently.
enum SimgcfStatus simgcf_model_refresh(struct SimgcfModel *model, const struct SimgcfGraph *graph);

// # Safety
// `model` is a live handle or null.
size_t simgcf_model_user_count(const struct SimgcfModel *model);

// # Safety
// `model` is a live handle or null.
size_t simgcf_model_item_count(const struct SimgcfModel *model);

// Preference score of `user` for `item`.
//
// # Safety
// `model` is a live handle and `score` is writable.
enum SimgcfStatus simgcf_model_score(const struct SimgcfModel *model,
                                     size_t user,
                                     size_t item,
                                     double *score);

// Writes up to `k` item indices for `user`, best first, skipping the
// `exclude_count` items in `exclude`. `written` receives the count.
//
// # Safety
// `exclude` holds `exclude_count` values, `out` has room for `k`, and
// `written` is writable.
enum SimgcfStatus simgcf_model_top_k(const struct SimgcfModel *model,
                                     size_t user,
                                     size_t k,
                                     const uint32_t *exclude,
                                     size_t exclude_count,
                                     uint32_t *out,
                                     size_t *written);

// # Safety
// `model` came from this library and is not used afterwards; null is a no-op.
void simgcf_model_free(struct SimgcfModel *model);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIMGCF_H */
