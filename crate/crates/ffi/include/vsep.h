#ifndef VSEP_H
#define VSEP_H

/* Generated by cbindgen; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum VsepRule {
  VSEP_RULE_HEAVY_EDGE = 0,
  VSEP_RULE_RANDOM = 1,
} VsepRule;

typedef enum VsepStatus {
  VSEP_STATUS_OK = 0,
  VSEP_STATUS_INVALID_ARGUMENT = 1,
  VSEP_STATUS_IO = 2,
  VSEP_STATUS_PARSE = 3,
  VSEP_STATUS_INFEASIBLE = 4,
  VSEP_STATUS_INTERNAL = 5,
  VSEP_STATUS_NULL_POINTER = 6,
  VSEP_STATUS_PANIC = 7,
} VsepStatus;

/**
 * Values written by [`vsep_partition_labels`].
 */
typedef enum VsepLabel {
  VSEP_LABEL_A = 0,
  VSEP_LABEL_B = 1,
  VSEP_LABEL_S = 2,
} VsepLabel;

typedef struct VsepGraph VsepGraph;

typedef struct VsepPartition VsepPartition;

/**
 * Solver settings. A NaN `gamma` means the per-level default.
 */
typedef struct VsepOptions {
  double balance;
  uint64_t seed;
  enum VsepRule rule;
  double gamma;
  double epsilon;
  double eta;
} VsepOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *vsep_last_error_message(void);

struct VsepOptions vsep_options_default(void);

/**
 * Loads a METIS graph file.
 *
 * # Safety
 * `path` must be a nul-terminated string and `out` a valid pointer.
 */
enum VsepStatus vsep_graph_from_metis_file(const char *path, struct VsepGraph **out);

/**
 * Builds a graph on `n` vertices from `m` undirected edges `(us[k], vs[k])`
 * (0-based). `weights` may be null for unit edge weights.
 *
 * # Safety
 * `us` and `vs` (and `weights` unless null) must point to `m` elements;
 * `out` must be a valid pointer.
 */
enum VsepStatus vsep_graph_from_edges(size_t n,
                                      const size_t *us,
                                      const size_t *vs,
                                      const double *weights,
                                      size_t m,
                                      struct VsepGraph **out);

/**
 * Replaces the vertex weights (all positive, `len` equal to the vertex count).
 *
 * # Safety
 * `graph` must come from this library; `weights` must point to `len` values.
 */
enum VsepStatus vsep_graph_set_vertex_weights(struct VsepGraph *graph,
                                              const double *weights,
                                              size_t len);

/**
 * Replaces the vertex costs (`len` equal to the vertex count).
 *
 * # Safety
 * `graph` must come from this library; `costs` must point to `len` values.
 */
enum VsepStatus vsep_graph_set_vertex_costs(struct VsepGraph *graph,
                                            const double *costs,
                                            size_t len);

/**
 * # Safety
 * `graph` must be null or come from this library.
 */
size_t vsep_graph_num_vertices(const struct VsepGraph *graph);

/**
 * # Safety
 * `graph` must be null or come from this library.
 */
size_t vsep_graph_num_edges(const struct VsepGraph *graph);

/**
 * # Safety
 * `graph` must be null or come from this library and not be used again.
 */
void vsep_graph_free(struct VsepGraph *graph);

/**
 * Computes a separator. `options` may be null for the defaults.
 *
 * # Safety
 * `graph` must come from this library; `options` must be null or valid;
 * `out` must be a valid pointer.
 */
enum VsepStatus vsep_solve(const struct VsepGraph *graph,
                           const struct VsepOptions *options,
                           struct VsepPartition **out);

/**
 * Number of vertices covered by the partition.
 *
 * # Safety
 * `part` must be null or come from this library.
 */
size_t vsep_partition_len(const struct VsepPartition *part);

/**
 * # Safety
 * `part` must be null or come from this library.
 */
double vsep_partition_cost(const struct VsepPartition *part);

/**
 * # Safety
 * `part` must be null or come from this library.
 */
double vsep_partition_weight_a(const struct VsepPartition *part);

/**
 * # Safety
 * `part` must be null or come from this library.
 */
double vsep_partition_weight_b(const struct VsepPartition *part);

/**
 * # Safety
 * `part` must be null or come from this library.
 */
bool vsep_partition_feasible(const struct VsepPartition *part);

/**
 * Number of levels in the hierarchy used for the solve.
 *
 * # Safety
 * `part` must be null or come from this library.
 */
size_t vsep_partition_levels(const struct VsepPartition *part);

/**
 * Copies the labels (see [`VsepLabel`]) into `out`, which must hold
 * exactly [`vsep_partition_len`] bytes.
 *
 * # Safety
 * `part` must come from this library; `out` must point to `len` bytes.
 */
enum VsepStatus vsep_partition_labels(const struct VsepPartition *part, uint8_t *out, size_t len);

/**
 * # Safety
 * `part` must be null or come from this library and not be used again.
 */
void vsep_partition_free(struct VsepPartition *part);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VSEP_H */
