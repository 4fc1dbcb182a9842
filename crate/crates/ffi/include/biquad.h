#ifndef BIQUAD_H
#define BIQUAD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BqCollatzStatus {
  BQ_COLLATZ_STATUS_CONVERGED_GAP = 0,
  BQ_COLLATZ_STATUS_CONVERGED_STAGNATION = 1,
  BQ_COLLATZ_STATUS_MAX_ITERATIONS = 2,
  BQ_COLLATZ_STATUS_DEGENERATE_BREAKDOWN = 3,
} BqCollatzStatus;

typedef enum BqEigenClass {
  BQ_EIGEN_CLASS_M = 0,
  BQ_EIGEN_CLASS_MPLUS = 1,
  BQ_EIGEN_CLASS_MPLUSPLUS = 2,
} BqEigenClass;

/**
 * Result code of every fallible call.
 */
typedef enum BqStatus {
  BQ_STATUS_OK = 0,
  BQ_STATUS_NULL_POINTER = 1,
  BQ_STATUS_INVALID_ARGUMENT = 2,
  BQ_STATUS_DIMENSION_MISMATCH = 3,
  BQ_STATUS_NOT_NONNEGATIVE = 4,
  BQ_STATUS_DEGENERATE = 5,
  BQ_STATUS_PARSE = 6,
  BQ_STATUS_INTERNAL = 7,
  BQ_STATUS_PANIC = 8,
} BqStatus;

/**
 * Opaque list of eigenpairs.
 */
typedef struct BqEigenList BqEigenList;

/**
 * Opaque tensor handle.
 */
typedef struct BqTensor BqTensor;

typedef struct BqCollatzConfig {
  size_t k_max;
  double epsilon;
  /**
   * Nonzero: stop only when the bounds meet.
   */
  bool gap_only;
} BqCollatzConfig;

typedef struct BqCollatzSummary {
  enum BqCollatzStatus status;
  double lambda_lower;
  double lambda_upper;
  double lambda_est;
  size_t iterations;
  double residual;
} BqCollatzSummary;

typedef struct BqIrreducibility {
  bool x_partial;
  bool y_partial;
  bool irreducible;
  bool method_agreement;
} BqIrreducibility;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *bq_last_error_message(void);

/**
 * Creates a tensor from `m·m·n·n` row-major entries.
 *
 * # Safety
 * `entries` must point to `len` readable doubles; `out` must be writable.
 */
enum BqStatus bq_tensor_new_dense(size_t m,
                                  size_t n,
                                  const double *entries,
                                  size_t len,
                                  struct BqTensor **out);

/**
 * Parses a tensor from JSON text (`dense` or `coo` form).
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum BqStatus bq_tensor_from_json(const char *json, struct BqTensor **out);

/**
 * Releases a tensor; null is ignored.
 *
 * # Safety
 * `t` must come from this library and not be used afterwards.
 */
void bq_tensor_free(struct BqTensor *t);

/**
 * # Safety
 * Pointers must be valid; `m` and `n` must be writable.
 */
enum BqStatus bq_tensor_dims(const struct BqTensor *t, size_t *m, size_t *n);

/**
 * # Safety
 * Pointers must be valid.
 */
enum BqStatus bq_tensor_entry(const struct BqTensor *t,
                              size_t i1,
                              size_t j1,
                              size_t i2,
                              size_t j2,
                              double *out);

/**
 * Serializes a tensor to JSON; release the string with [`bq_string_free`].
 *
 * # Safety
 * Pointers must be valid.
 */
enum BqStatus bq_tensor_to_json(const struct BqTensor *t, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void bq_string_free(char *s);

/**
 * `f(x, y)`.
 *
 * # Safety
 * `x` and `y` must point to `x_len` and `y_len` doubles.
 */
enum BqStatus bq_eval_f(const struct BqTensor *t,
                        const double *x,
                        size_t x_len,
                        const double *y,
                        size_t y_len,
                        double *out);

/**
 * `g(x, y)` into an `m`-vector.
 *
 * # Safety
 * Buffers must have the stated lengths.
 */
enum BqStatus bq_grad_g(const struct BqTensor *t,
                        const double *x,
                        size_t x_len,
                        const double *y,
                        size_t y_len,
                        double *out,
                        size_t out_len);

/**
 * `h(x, y)` into an `n`-vector.
 *
 * # Safety
 * Buffers must have the stated lengths.
 */
enum BqStatus bq_grad_h(const struct BqTensor *t,
                        const double *x,
                        size_t x_len,
                        const double *y,
                        size_t y_len,
                        double *out,
                        size_t out_len);

/**
 * `max(‖g − λx‖∞, ‖h − λy‖∞)`.
 *
 * # Safety
 * Buffers must have the stated lengths.
 */
enum BqStatus bq_residual(const struct BqTensor *t,
                          double lambda,
                          const double *x,
                          size_t x_len,
                          const double *y,
                          size_t y_len,
                          double *out);

/**
 * Default Collatz settings: `k_max = 1000`, `epsilon = 1e-8`.
 */
struct BqCollatzConfig bq_collatz_default_config(void);

/**
 * Collatz iteration from `(x0, y0)`. `x_out` / `y_out` receive the final
 * vectors when non-null and must then hold `m` / `n` doubles.
 *
 * # Safety
 * Buffers must have the stated lengths; `cfg` and `out` must be valid.
 */
enum BqStatus bq_collatz_run(const struct BqTensor *t,
                             const double *x0,
                             size_t x_len,
                             const double *y0,
                             size_t y_len,
                             const struct BqCollatzConfig *cfg,
                             struct BqCollatzSummary *out,
                             double *x_out,
                             double *y_out);

/**
 * Multistart Collatz iteration; `out` receives the best run.
 *
 * # Safety
 * All pointers must be valid.
 */
enum BqStatus bq_collatz_multistart(const struct BqTensor *t,
                                    const struct BqCollatzConfig *cfg,
                                    size_t n_starts,
                                    uint64_t seed,
                                    struct BqCollatzSummary *out,
                                    double *ratio_lower,
                                    double *ratio_upper);

/**
 * Irreducibility verdicts, counting entries `> tol` as nonzero.
 *
 * # Safety
 * Pointers must be valid.
 */
enum BqStatus bq_irreducibility(const struct BqTensor *t, double tol, struct BqIrreducibility *out);

/**
 * All M-eigenpairs of a `2 × 2 × 2 × 2` tensor, by descending eigenvalue.
 *
 * # Safety
 * Pointers must be valid; release the list with [`bq_eigen_list_free`].
 */
enum BqStatus bq_enumerate_2x2(const struct BqTensor *t,
                               size_t grid,
                               double tol,
                               struct BqEigenList **out);

/**
 * # Safety
 * `list` must be a valid list or null (length 0).
 */
size_t bq_eigen_list_len(const struct BqEigenList *list);

/**
 * Copies pair `index`. `x_out` and `y_out` must hold `m` and `n` doubles.
 *
 * # Safety
 * Pointers must be valid.
 */
enum BqStatus bq_eigen_list_get(const struct BqEigenList *list,
                                size_t index,
                                double *lambda,
                                double *x_out,
                                size_t x_len,
                                double *y_out,
                                size_t y_len,
                                enum BqEigenClass *class_);

/**
 * # Safety
 * `list` must come from this library and not be used afterwards.
 */
void bq_eigen_list_free(struct BqEigenList *list);

/**
 * Tensor `b[i,k]·c[j,l]` from symmetric row-major `m × m` and `n × n`
 * matrices.
 *
 * # Safety
 * `b` and `c` must hold `m·m` and `n·n` doubles.
 */
enum BqStatus bq_kron_build(const double *b,
                            size_t m,
                            const double *c,
                            size_t n,
                            struct BqTensor **out);

/**
 * Seeded random symmetric nonnegative tensor.
 *
 * # Safety
 * `out` must be writable.
 */
enum BqStatus bq_gen_random_symmetric(size_t m, size_t n, uint64_t seed, struct BqTensor **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIQUAD_H */
