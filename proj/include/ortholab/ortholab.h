/* C interface to ortholab: orthogonality of subspaces in l^p spaces.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every call returns an ortho_status; on failure ortho_last_error() holds a
 * message for the calling thread.
 *
 * Operations that run a numerical search produce an ortho_report_t. When the
 * search fails (ORTHO_NO_CONVERGENCE ... ORTHO_REJECTION_BUDGET) the report is
 * still produced and holds the best result found, so *out must be freed in
 * that case as well. Matrices are row-major; a subspace is given by the
 * columns of an N x k matrix. */
#ifndef ORTHOLAB_H
#define ORTHOLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(ORTHOLAB_BUILD)
#define ORTHO_API __declspec(dllexport)
#else
#define ORTHO_API __declspec(dllimport)
#endif
#else
#define ORTHO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ortho_status {
  ORTHO_OK = 0,
  /* input errors */
  ORTHO_INVALID_ARGUMENT = 1,
  ORTHO_PRECONDITION = 2,
  ORTHO_ZERO_VECTOR = 3,
  ORTHO_RANK_DEFICIENT = 4,
  ORTHO_DIMENSION_MISMATCH = 5,
  ORTHO_CHART_FAILURE = 6,
  ORTHO_DEGENERATE_FUNCTIONAL = 7,
  /* search failures; a best-so-far report is still returned */
  ORTHO_NO_CONVERGENCE = 20,
  ORTHO_BUDGET_EXHAUSTED = 21,
  ORTHO_EXISTENCE_SEARCH_FAILED = 22,
  ORTHO_UNSTABLE = 23,
  ORTHO_RANK_NOT_SATURATED = 24,
  ORTHO_TRANSVERSALITY_FAILURE = 25,
  ORTHO_REJECTION_BUDGET = 26,
  /* anything else */
  ORTHO_INTERNAL = 99
} ortho_status;

/* "ok", "precondition", "no_convergence", ... */
ORTHO_API const char* ortho_status_name(ortho_status status);
/* Nonzero for the search-failure statuses. */
ORTHO_API int ortho_status_is_solver_failure(ortho_status status);
ORTHO_API const char* ortho_last_error(void);
ORTHO_API const char* ortho_version(void);

typedef struct ortho_space ortho_space_t;
typedef struct ortho_subspace ortho_subspace_t;
typedef struct ortho_report ortho_report_t;

/* l^p_N */
ORTHO_API ortho_status ortho_space_finite(int64_t n, double p, ortho_space_t** out);
/* L^p(0,1) on a composite Gauss-Legendre grid of `grid` nodes (0: 2048). */
ORTHO_API ortho_status ortho_space_l01(double p, int64_t grid, ortho_space_t** out);
ORTHO_API int64_t ortho_space_dim(const ortho_space_t* space);
ORTHO_API double ortho_space_p(const ortho_space_t* space);
ORTHO_API void ortho_space_free(ortho_space_t* space);

/* Span of the columns of an n x k row-major matrix. */
ORTHO_API ortho_status ortho_subspace_span(const double* data, int64_t n, int64_t k,
                                           ortho_subspace_t** out);
/* {x : <f_j, x> = 0} for the columns f_j of an n x m row-major matrix. */
ORTHO_API ortho_status ortho_subspace_kernel(const double* data, int64_t n, int64_t m,
                                             ortho_subspace_t** out);
/* Zero-based coordinate axes. */
ORTHO_API ortho_status ortho_subspace_coordinate(int64_t n, const int64_t* axes, int64_t k,
                                                 ortho_subspace_t** out);
ORTHO_API ortho_status ortho_subspace_random(int64_t n, int64_t k, uint64_t seed,
                                             ortho_subspace_t** out);
/* 2-plane x_j = gamma[j-2][0] x_0 + gamma[j-2][1] x_1, gamma (n-2) x 2 row-major. */
ORTHO_API ortho_status ortho_subspace_gamma(const double* gamma, int64_t n,
                                            ortho_subspace_t** out);
ORTHO_API int64_t ortho_subspace_ambient_dim(const ortho_subspace_t* s);
ORTHO_API int64_t ortho_subspace_dim(const ortho_subspace_t* s);
/* Copies the orthonormal basis (n x k, row-major) into `out`. */
ORTHO_API ortho_status ortho_subspace_basis(const ortho_subspace_t* s, double* out, size_t len);
ORTHO_API void ortho_subspace_free(ortho_subspace_t* s);

typedef struct ortho_options {
  uint64_t seed;     /* 0 */
  int32_t threads;   /* 0: hardware concurrency */
  double opt_tol;    /* projection optimality residual, 1e-8 */
  double tol;        /* orthogonality residual for vectors, 1e-9 */
  double rank_tol;   /* relative rank tolerance, 1e-8 */
  double eps;        /* eps-orthogonality, 0 */
  int64_t samples;   /* normal-span samples (0: 64 k^2); q1 sample count (0: 2000) */
  int64_t starts;    /* certify random starts (16); borsuk restarts (64) */
  int64_t trials;    /* badness sweep / KKM trials (100) */
  int64_t budget;    /* certify evaluations per simplex run (1500) */
  int64_t threshold; /* badness threshold (0: k + 1, or 4 for p = 5, k = 2) */
  int32_t angle_grid; /* defect angle grid (720) */
  int32_t certify;    /* bookkeeping: also certify (0) */
} ortho_options_t;

ORTHO_API void ortho_options_init(ortho_options_t* options);

/* Metric projection of v (length N) onto L. */
ORTHO_API ortho_status ortho_project(const ortho_space_t* space, const double* v,
                                     const ortho_subspace_t* L, const ortho_options_t* options,
                                     ortho_report_t** out);
ORTHO_API ortho_status ortho_distance(const ortho_space_t* space, const double* v,
                                      const ortho_subspace_t* L,
                                      const ortho_options_t* options, ortho_report_t** out);
/* Is span{v} orthogonal to E (duality-map residual <= tol)? */
ORTHO_API ortho_status ortho_test_vector(const ortho_space_t* space, const double* v,
                                         const ortho_subspace_t* E,
                                         const ortho_options_t* options, ortho_report_t** out);
/* Is K (1 - eps)-orthogonal to E? */
ORTHO_API ortho_status ortho_test_subspace(const ortho_space_t* space, const ortho_subspace_t* K,
                                           const ortho_subspace_t* E,
                                           const ortho_options_t* options, ortho_report_t** out);
/* Normal-span classification of a section. */
ORTHO_API ortho_status ortho_badness(const ortho_space_t* space, const ortho_subspace_t* L,
                                     const ortho_options_t* options, ortho_report_t** out);
/* options->trials random k-planes of l^p_N; JSON summary plus CSV rows
 * trial,seed,rank,is_bad. */
ORTHO_API ortho_status ortho_badness_sweep(double p, int64_t n, int64_t k,
                                           const ortho_options_t* options, ortho_report_t** out);
/* Omega(E) over k-planes; CSV holds the per-start trace. */
ORTHO_API ortho_status ortho_certify(const ortho_space_t* space, const ortho_subspace_t* E,
                                     int64_t k, const ortho_options_t* options,
                                     ortho_report_t** out);
/* Unit vector of F orthogonal to E. With options->trials > 1 also a KKM
 * success-rate check over that many seeds. */
ORTHO_API ortho_status ortho_borsuk(const ortho_space_t* space, const ortho_subspace_t* E,
                                    const ortho_subspace_t* F, const ortho_options_t* options,
                                    ortho_report_t** out);
ORTHO_API ortho_status ortho_q1(int64_t n, int64_t grid, const ortho_options_t* options,
                                ortho_report_t** out);
ORTHO_API ortho_status ortho_rank_lemma(int64_t n, int64_t grid, const ortho_options_t* options,
                                        ortho_report_t** out);
/* Exponent and dimensions for the (m, k) construction; certifies when
 * options->certify is set. n = 0 selects N = 2m. */
ORTHO_API ortho_status ortho_bookkeeping(int64_t m, int64_t k, int64_t n,
                                         const ortho_options_t* options, ortho_report_t** out);

/* Report body as JSON (deterministic for fixed inputs). */
ORTHO_API const char* ortho_report_json(const ortho_report_t* report);
/* Tabular output (sweeps, traces); empty string when there is none. */
ORTHO_API const char* ortho_report_csv(const ortho_report_t* report);
ORTHO_API void ortho_report_free(ortho_report_t* report);

#ifdef __cplusplus
}
#endif

#endif /* ORTHOLAB_H */
