#ifndef ERGOCOEF_H
#define ERGOCOEF_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define ERGO_NORM_ONE 1

#define ERGO_NORM_INF 2

typedef enum ErgoStatus {
  ERGO_STATUS_OK = 0,
  ERGO_STATUS_NULL_POINTER = 1,
  ERGO_STATUS_INVALID_ARGUMENT = 2,
  ERGO_STATUS_PARSE = 3,
  ERGO_STATUS_INVALID_MATRIX = 4,
  ERGO_STATUS_DIMENSION_MISMATCH = 5,
  ERGO_STATUS_NOT_CONSTANT_ROW_SUM = 6,
  ERGO_STATUS_SINGULAR_MATRIX = 7,
  ERGO_STATUS_DEGENERATE_COEFFICIENT = 8,
  ERGO_STATUS_TRIVIAL_EIGENVALUE_NOT_ZERO = 9,
  ERGO_STATUS_DIMENSION_TOO_LARGE = 10,
  ERGO_STATUS_NON_CONVERGENCE = 11,
  ERGO_STATUS_GRAPH_DISCONNECTED = 12,
  ERGO_STATUS_NO_EDGES = 13,
  ERGO_STATUS_INVALID_GRAPH = 14,
  ERGO_STATUS_PANIC = 99,
} ErgoStatus;

// Opaque simple undirected graph.
typedef struct ErgoGraph ErgoGraph;

// Opaque square matrix.
typedef struct ErgoMatrix ErgoMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null if none occurred.
const char *ergo_last_error_message(void);

// Static description of a status code.
const char *ergo_status_string(enum ErgoStatus status);

// Creates an `n x n` matrix from `n * n` row-major entries.
//
// # Safety
// `data` must point to `n * n` readable doubles; `out` must be writable.
enum ErgoStatus ergo_matrix_new(size_t n, const double *data, struct ErgoMatrix **out);

// Parses the matrix text format (optional `n` line, then rows; `#` comments).
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum ErgoStatus ergo_matrix_parse(const char *text, struct ErgoMatrix **out);

// Releases a matrix. Null is ignored.
//
// # Safety
// `m` must come from this library and not be used afterwards.
void ergo_matrix_free(struct ErgoMatrix *m);

// Dimension of `m`, or 0 for null.
//
// # Safety
// `m` must be null or a live handle.
size_t ergo_matrix_dim(const struct ErgoMatrix *m);

// Copies the `n * n` row-major entries into `out`.
//
// # Safety
// `m` must be a live handle; `out` must have room for `n * n` doubles.
enum ErgoStatus ergo_matrix_entries(const struct ErgoMatrix *m, double *out);

// `tau_p(m)`. Defined for any square matrix.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum ErgoStatus ergo_tau(const struct ErgoMatrix *m, uint32_t p, double *out);

// Common row sum of an e-matrix.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum ErgoStatus ergo_trivial_eigenvalue(const struct ErgoMatrix *m, double *out);

// `tau_p(A^k)^(1/k)`, an upper bound on every non-trivial eigenvalue modulus.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum ErgoStatus ergo_largest_bound(const struct ErgoMatrix *m, uint32_t p, uint64_t k, double *out);

// Doubling estimate of the largest non-trivial modulus. `out_levels` and
// `out_converged` may be null.
//
// # Safety
// `m` must be a live handle; non-null out pointers must be writable.
enum ErgoStatus ergo_estimate_largest(const struct ErgoMatrix *m,
                                      uint32_t p,
                                      double rel_tol,
                                      uint32_t max_level,
                                      double *out_estimate,
                                      uint32_t *out_levels,
                                      bool *out_converged);

// Lower bound on the smallest non-trivial modulus. With `use_alpha` false
// the matrix must be nonsingular; otherwise `A + alpha J` is inverted, which
// requires a zero trivial eigenvalue that is simple.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum ErgoStatus ergo_smallest_bound(const struct ErgoMatrix *m,
                                    uint32_t p,
                                    uint64_t k,
                                    bool use_alpha,
                                    double alpha,
                                    double *out);

// Doubling estimate of the smallest non-trivial modulus; `use_alpha` as in
// [`ergo_smallest_bound`].
//
// # Safety
// `m` must be a live handle; non-null out pointers must be writable.
enum ErgoStatus ergo_estimate_smallest(const struct ErgoMatrix *m,
                                       uint32_t p,
                                       double rel_tol,
                                       uint32_t max_level,
                                       bool use_alpha,
                                       double alpha,
                                       double *out_estimate,
                                       uint32_t *out_levels,
                                       bool *out_converged);

// Creates a graph on `n` vertices from `edge_count` zero-based pairs stored
// as `edges[2i], edges[2i + 1]`.
//
// # Safety
// `edges` must point to `2 * edge_count` readable values (it may be null
// when `edge_count` is 0); `out` must be writable.
enum ErgoStatus ergo_graph_new(size_t n,
                               const size_t *edges,
                               size_t edge_count,
                               struct ErgoGraph **out);

// Parses an edge list (`u v` per line, optional `n <count>` line, `#`
// comments).
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum ErgoStatus ergo_graph_parse(const char *text, bool one_based, struct ErgoGraph **out);

// Releases a graph. Null is ignored.
//
// # Safety
// `g` must come from this library and not be used afterwards.
void ergo_graph_free(struct ErgoGraph *g);

// Vertex count of `g`, or 0 for null.
//
// # Safety
// `g` must be null or a live handle.
size_t ergo_graph_vertex_count(const struct ErgoGraph *g);

// Laplacian `D - Adj` as a new matrix handle.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum ErgoStatus ergo_graph_laplacian(const struct ErgoGraph *g, struct ErgoMatrix **out);

// Closed-form `tau_1` and `tau_inf` of the Laplacian.
//
// # Safety
// `g` must be a live handle; both out pointers must be writable.
enum ErgoStatus ergo_graph_tau(const struct ErgoGraph *g,
                               uint64_t *out_tau1,
                               uint64_t *out_tau_inf);

// Lower bound on the algebraic connectivity through `(L + alpha J)^-k`.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum ErgoStatus ergo_graph_connectivity_bound(const struct ErgoGraph *g,
                                              uint32_t p,
                                              uint64_t k,
                                              double alpha,
                                              double *out);

// Lower bound on the algebraic connectivity maximized over diagonal shifts
// `(L + alpha I)^-k`; `out_alpha` (may be null) receives the best shift.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum ErgoStatus ergo_graph_connectivity_bound_sup(const struct ErgoGraph *g,
                                                  uint32_t p,
                                                  uint64_t k,
                                                  double *out,
                                                  double *out_alpha);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ERGOCOEF_H */
