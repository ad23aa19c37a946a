#ifndef RCA_H
#define RCA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum RcaStatus {
  RCA_STATUS_OK = 0,
  RCA_STATUS_NULL_POINTER = 1,
  RCA_STATUS_INVALID_ARGUMENT = 2,
  RCA_STATUS_DIMENSION_MISMATCH = 3,
  RCA_STATUS_NON_FINITE = 4,
  RCA_STATUS_NOT_SYMMETRIC = 5,
  RCA_STATUS_NOT_POSITIVE_DEFINITE = 6,
  RCA_STATUS_DEGENERATE_VIEW = 7,
  RCA_STATUS_BUFFER_TOO_SMALL = 8,
  RCA_STATUS_INTERNAL = 9,
} RcaStatus;

/**
 * Rank rule for the shared/private fit.
 */
typedef enum RcaRankRule {
  RCA_RANK_RULE_SAMPLING_EDGE = 0,
  RCA_RANK_RULE_STRICT = 1,
} RcaRankRule;

/**
 * Conditional-mean predictor for view 1 given view 2.
 */
typedef enum RcaPredictor {
  RCA_PREDICTOR_PRINTED = 0,
  RCA_PREDICTOR_EXACT = 1,
} RcaPredictor;

/**
 * Canonical correlation fit.
 */
typedef struct RcaCcaHandle RcaCcaHandle;

/**
 * Residual-component fit (also produced by the PPCA constructor).
 */
typedef struct RcaFitHandle RcaFitHandle;

/**
 * Shared/private latent model.
 */
typedef struct RcaModelHandle RcaModelHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into this library from the same thread.
 */
const char *rca_last_error(void);

/**
 * Fits the residual components of `gram` (`n × n`) against `sigma`.
 * A NULL `sigma` means `sigma2 · I`.
 *
 * # Safety
 * `gram` must hold `n·n` doubles, `sigma` (if non-null) likewise, and `out`
 * must be a valid pointer.
 */
enum RcaStatus rca_fit_new(const double *gram,
                           size_t n,
                           const double *sigma,
                           double sigma2,
                           struct RcaFitHandle **out);

/**
 * Probabilistic PCA of `y` (`rows × cols`, one sample per row) with noise
 * variance `sigma2`. The handle's loadings are the maximum-likelihood `W`.
 *
 * # Safety
 * `y` must hold `rows·cols` doubles and `out` must be a valid pointer.
 */
enum RcaStatus rca_ppca_new(const double *y,
                            size_t rows,
                            size_t cols,
                            double sigma2,
                            struct RcaFitHandle **out);

/**
 * Dimension `n` and retained rank `q` of a fit.
 *
 * # Safety
 * `h` must come from `rca_fit_new`/`rca_ppca_new`; out pointers must be valid.
 */
enum RcaStatus rca_fit_shape(const struct RcaFitHandle *h, size_t *n, size_t *q);

/**
 * Copies all `n` generalized eigenvalues, descending.
 *
 * # Safety
 * `h` must be a live fit handle and `out` must hold `len` doubles.
 */
enum RcaStatus rca_fit_eigenvalues(const struct RcaFitHandle *h, double *out, size_t len);

/**
 * Copies the `n × q` loadings, row-major.
 *
 * # Safety
 * `h` must be a live fit handle and `out` must hold `len` doubles.
 */
enum RcaStatus rca_fit_loadings(const struct RcaFitHandle *h, double *out, size_t len);

/**
 * Log-likelihood stored with the fit.
 *
 * # Safety
 * `h` must be a live fit handle and `out` a valid pointer.
 */
enum RcaStatus rca_fit_log_likelihood(const struct RcaFitHandle *h, double *out);

/**
 * Releases a fit handle. NULL is ignored.
 *
 * # Safety
 * `h` must be NULL or a handle not yet freed.
 */
void rca_fit_free(struct RcaFitHandle *h);

/**
 * Canonical correlation analysis of two views sharing `rows` samples.
 *
 * # Safety
 * `y1` must hold `rows·d1` doubles, `y2` `rows·d2`, and `out` must be valid.
 */
enum RcaStatus rca_cca_new(const double *y1,
                           const double *y2,
                           size_t rows,
                           size_t d1,
                           size_t d2,
                           struct RcaCcaHandle **out);

/**
 * Number of retained canonical pairs.
 *
 * # Safety
 * `h` must be a live CCA handle and `q` a valid pointer.
 */
enum RcaStatus rca_cca_rank(const struct RcaCcaHandle *h, size_t *q);

/**
 * Copies the `q` canonical correlations, descending.
 *
 * # Safety
 * `h` must be a live CCA handle and `out` must hold `len` doubles.
 */
enum RcaStatus rca_cca_correlations(const struct RcaCcaHandle *h, double *out, size_t len);

/**
 * Copies the canonical directions of `view` (1 or 2), `d_view × q` row-major.
 *
 * # Safety
 * `h` must be a live CCA handle and `out` must hold `len` doubles.
 */
enum RcaStatus rca_cca_directions(const struct RcaCcaHandle *h,
                                  uint32_t view,
                                  double *out,
                                  size_t len);

/**
 * Releases a CCA handle. NULL is ignored.
 *
 * # Safety
 * `h` must be NULL or a handle not yet freed.
 */
void rca_cca_free(struct RcaCcaHandle *h);

/**
 * Fits the shared/private model. `tol <= 0` selects the default tolerance.
 *
 * # Safety
 * `y1` must hold `rows·d1` doubles, `y2` `rows·d2`, and `out` must be valid.
 */
enum RcaStatus rca_itrca_new(const double *y1,
                             const double *y2,
                             size_t rows,
                             size_t d1,
                             size_t d2,
                             double alpha,
                             double tol,
                             size_t max_iter,
                             enum RcaRankRule rank_rule,
                             struct RcaModelHandle **out);

/**
 * Shared rank and the two private ranks.
 *
 * # Safety
 * `h` must be a live model handle; out pointers must be valid.
 */
enum RcaStatus rca_itrca_ranks(const struct RcaModelHandle *h, size_t *qs, size_t *q1, size_t *q2);

/**
 * Iterations run, whether the tolerance was met, and the final log-likelihood.
 *
 * # Safety
 * `h` must be a live model handle; out pointers must be valid.
 */
enum RcaStatus rca_itrca_summary(const struct RcaModelHandle *h,
                                 size_t *iterations,
                                 bool *converged,
                                 double *log_likelihood);

/**
 * Predicts view 1 for each row of `y2` (`rows × d2`), writing `rows × d1`
 * values row-major into `out`.
 *
 * # Safety
 * `h` must be a live model handle, `y2` must hold `rows·d2` doubles and `out`
 * must hold `len` doubles.
 */
enum RcaStatus rca_itrca_predict(const struct RcaModelHandle *h,
                                 const double *y2,
                                 size_t rows,
                                 enum RcaPredictor predictor,
                                 double *out,
                                 size_t len);

/**
 * Releases a model handle. NULL is ignored.
 *
 * # Safety
 * `h` must be NULL or a handle not yet freed.
 */
void rca_itrca_free(struct RcaModelHandle *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RCA_H */
