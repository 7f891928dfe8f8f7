/* rkhs — kernel interpolation and sampling toolkit, C API.
 *
 * Every object is an opaque handle created by an rkhs_*_create-style
 * function and released with the matching rkhs_*_free. Functions return
 * RKHS_OK or an error code; rkhs_last_error() returns a thread-local,
 * human-readable description of the most recent failure on the calling
 * thread. Output parameters are written only on success.
 *
 * Conventions: points are row-major double arrays (n points x dim
 * coordinates); matrices are row-major; indices are 0-based. Buffers
 * returned through double** / char** are released with rkhs_buffer_free.
 */
#ifndef RKHS_H
#define RKHS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#ifdef RKHS_BUILDING_SHARED
#define RKHS_API __declspec(dllexport)
#else
#define RKHS_API __declspec(dllimport)
#endif
#else
#define RKHS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rkhs_status {
  RKHS_OK = 0,
  RKHS_ERR_INVALID_ARGUMENT = 1,
  RKHS_ERR_DIMENSION = 2,
  RKHS_ERR_DUPLICATE_POINT = 3,
  RKHS_ERR_NOT_POSITIVE_DEFINITE = 4,
  RKHS_ERR_INDEX = 5,
  RKHS_ERR_NUMERICAL = 6,
  RKHS_ERR_PARSE = 7,
  RKHS_ERR_IO = 8
} rkhs_status;

typedef struct rkhs_kernel rkhs_kernel;     /* positive definite kernel */
typedef struct rkhs_points rkhs_points;     /* ordered distinct point set */
typedef struct rkhs_gram rkhs_gram;         /* kernel matrix + factorizations */
typedef struct rkhs_model rkhs_model;       /* fitted interpolant */
typedef struct rkhs_dual rkhs_dual;         /* dual (Lagrange) basis vector */
typedef struct rkhs_sequence rkhs_sequence; /* point sequence generator */
typedef struct rkhs_report rkhs_report;     /* truncation diagnostic report */

RKHS_API const char* rkhs_last_error(void);
RKHS_API const char* rkhs_status_name(rkhs_status status);
RKHS_API void rkhs_buffer_free(void* buffer);

/* ---- kernels ---------------------------------------------------------- */

RKHS_API rkhs_status rkhs_kernel_gaussian(int dim, double shape, rkhs_kernel** out);
RKHS_API rkhs_status rkhs_kernel_imq(int dim, double shape, rkhs_kernel** out);
RKHS_API rkhs_status rkhs_kernel_tensor(const rkhs_kernel* left, const rkhs_kernel* right, rkhs_kernel** out);
/* JSON: {"type":"gaussian"|"imq"|"tensor","shape":...,"dim":...,"left":...,"right":...} */
RKHS_API rkhs_status rkhs_kernel_from_json(const char* json_text, rkhs_kernel** out);
RKHS_API rkhs_status rkhs_kernel_read_json(const char* path, rkhs_kernel** out);
RKHS_API rkhs_status rkhs_kernel_to_json(const rkhs_kernel* kernel, char** out_json);
/* Splits a tensor-product kernel into its factors (fails otherwise). */
RKHS_API rkhs_status rkhs_kernel_split(const rkhs_kernel* kernel, rkhs_kernel** out_left, rkhs_kernel** out_right);
RKHS_API int rkhs_kernel_dim(const rkhs_kernel* kernel);
RKHS_API rkhs_status rkhs_kernel_eval(const rkhs_kernel* kernel, const double* x, const double* y, int dim,
                                      double* out);
/* R_X(x): out must hold rkhs_points_count(points) values. */
RKHS_API rkhs_status rkhs_kernel_section(const rkhs_kernel* kernel, const double* x, int dim,
                                         const rkhs_points* points, double* out);
RKHS_API void rkhs_kernel_free(rkhs_kernel* kernel);

/* ---- point sets -------------------------------------------------------- */

RKHS_API rkhs_status rkhs_points_create(const double* coords_rowmajor, size_t count, int dim, rkhs_points** out);
/* Points CSV with header "x1,..,xd[,f]". out_samples (optional) receives the
 * f column when present, else NULL. */
RKHS_API rkhs_status rkhs_points_read_csv(const char* path, rkhs_points** out, double** out_samples);
RKHS_API rkhs_status rkhs_points_write_csv(const rkhs_points* points, const double* values_or_null,
                                           const char* path);
RKHS_API size_t rkhs_points_count(const rkhs_points* points);
RKHS_API int rkhs_points_dim(const rkhs_points* points);
RKHS_API rkhs_status rkhs_points_get(const rkhs_points* points, size_t index, double* out_coords);
RKHS_API void rkhs_points_free(rkhs_points* points);

/* ---- kernel matrix ----------------------------------------------------- */

RKHS_API rkhs_status rkhs_gram_assemble(const rkhs_kernel* kernel, const rkhs_points* points, rkhs_gram** out);
RKHS_API size_t rkhs_gram_size(const rkhs_gram* gram);
/* out must hold n*n values, row-major. */
RKHS_API rkhs_status rkhs_gram_entries(const rkhs_gram* gram, double* out);
/* Forces the Cholesky factorization; success certifies numerical positive
 * definiteness. On failure the message names the failing pivot index. */
RKHS_API rkhs_status rkhs_gram_cholesky(const rkhs_gram* gram);
RKHS_API rkhs_status rkhs_gram_riesz(const rkhs_gram* gram, double* lambda_min, double* lambda_max,
                                     double* condition);
RKHS_API rkhs_status rkhs_gram_native_norm_sq(const rkhs_gram* gram, const double* coeffs, size_t len, double* out);
RKHS_API rkhs_status rkhs_gram_native_inner(const rkhs_gram* gram, const double* coeffs_f, const double* coeffs_g,
                                            size_t len, double* out);
RKHS_API rkhs_status rkhs_gram_solve(const rkhs_gram* gram, const double* rhs, size_t len, double* out);
/* max-abs of A A^{-1} - I. */
RKHS_API rkhs_status rkhs_gram_biortho_residual(const rkhs_gram* gram, double* out);
RKHS_API rkhs_status rkhs_gram_write_csv(const rkhs_gram* gram, const char* path);
RKHS_API rkhs_status rkhs_gram_write_riesz_json(const rkhs_gram* gram, const char* path);
RKHS_API void rkhs_gram_free(rkhs_gram* gram);

/* ---- interpolation ----------------------------------------------------- */

RKHS_API rkhs_status rkhs_fit(const rkhs_kernel* kernel, const rkhs_points* points, const double* samples,
                              rkhs_model** out);
RKHS_API rkhs_status rkhs_model_eval(const rkhs_model* model, const double* x, int dim, double* out);
/* Evaluates at every probe point; out must hold rkhs_points_count(probes). */
RKHS_API rkhs_status rkhs_model_eval_many(const rkhs_model* model, const rkhs_points* probes, double* out);
RKHS_API size_t rkhs_model_size(const rkhs_model* model);
RKHS_API rkhs_status rkhs_model_coeffs(const rkhs_model* model, double* out);
RKHS_API void rkhs_model_free(rkhs_model* model);

/* Dual basis vector k (0-based): coefficients A^{-1} e_k. */
RKHS_API rkhs_status rkhs_lagrange_basis(const rkhs_gram* gram, size_t k, rkhs_dual** out);
RKHS_API rkhs_status rkhs_dual_eval(const rkhs_dual* dual, const double* x, int dim, double* out);
RKHS_API size_t rkhs_dual_size(const rkhs_dual* dual);
RKHS_API rkhs_status rkhs_dual_coeffs(const rkhs_dual* dual, double* out);
RKHS_API void rkhs_dual_free(rkhs_dual* dual);

/* Two-sided coefficient stability estimates. Arrays are {lhs, mid, rhs}. */
RKHS_API rkhs_status rkhs_stability_dual(const rkhs_gram* gram, const double* f_x, size_t len, double slack,
                                         double out_lmr[3], int* out_ok);
RKHS_API rkhs_status rkhs_stability_primal(const rkhs_gram* gram, const double* coeffs, size_t len, double slack,
                                           double out_lmr[3], int* out_ok);
RKHS_API rkhs_status rkhs_stability_write_json(const double dual_lmr[3], int dual_ok, const double primal_lmr[3],
                                               int primal_ok, const char* path);

/* Node values A c and kernel coefficients c of the span element with
 * kernel-basis coefficients c. Both outputs hold len values. */
RKHS_API rkhs_status rkhs_dual_representations(const rkhs_gram* gram, const double* coeffs, size_t len,
                                               double* out_lagrange, double* out_kernel);

/* ---- point sequences & truncation diagnostics -------------------------- */

RKHS_API rkhs_status rkhs_sequence_explicit(const rkhs_points* points, rkhs_sequence** out);
RKHS_API rkhs_status rkhs_sequence_lattice(int dim, double spacing, rkhs_sequence** out);
RKHS_API rkhs_status rkhs_sequence_random(int dim, double min_separation, double low, double high, uint64_t seed,
                                          rkhs_sequence** out);
/* JSON: {"type":"lattice"|"random"|"explicit", ...}; see the README. */
RKHS_API rkhs_status rkhs_sequence_from_json(const char* json_text, rkhs_sequence** out);
RKHS_API rkhs_status rkhs_sequence_read_json(const char* path, rkhs_sequence** out);
RKHS_API rkhs_status rkhs_sequence_prefix(const rkhs_sequence* sequence, size_t n, rkhs_points** out);
RKHS_API void rkhs_sequence_free(rkhs_sequence* sequence);

RKHS_API rkhs_status rkhs_truncated_dual(const rkhs_kernel* kernel, const rkhs_sequence* sequence, size_t n,
                                         size_t index, rkhs_dual** out);
RKHS_API rkhs_status rkhs_truncated_reconstruct(const rkhs_kernel* kernel, const rkhs_sequence* sequence,
                                                const double* samples, size_t len, size_t n, rkhs_model** out);

/* Runs nested sections and reports the conditioning trend. The verdict is a
 * numerical indicator, not a certificate. */
RKHS_API rkhs_status rkhs_determining_diagnostic(const rkhs_kernel* kernel, const rkhs_sequence* sequence,
                                                 const size_t* sizes, size_t size_count,
                                                 double stable_lambda_factor, rkhs_report** out);
RKHS_API size_t rkhs_report_rows(const rkhs_report* report);
/* Column arrays hold rkhs_report_rows() values each; any may be NULL. */
RKHS_API rkhs_status rkhs_report_data(const rkhs_report* report, size_t* sizes, double* lambda_mins,
                                      double* conditions, double* biorthos, double* drifts);
/* "stable" | "degrading" | "inconclusive" */
RKHS_API const char* rkhs_report_verdict(const rkhs_report* report);
/* 1 and writes *out_size if a section failed the PD test, else 0. */
RKHS_API int rkhs_report_failed_size(const rkhs_report* report, size_t* out_size);
RKHS_API rkhs_status rkhs_report_to_json(const rkhs_report* report, char** out_json);
RKHS_API rkhs_status rkhs_report_write_json(const rkhs_report* report, const char* path);
RKHS_API rkhs_status rkhs_report_write_csv(const rkhs_report* report, const char* path);
RKHS_API void rkhs_report_free(rkhs_report* report);

/* ---- tensor-product fast path ------------------------------------------ */

/* Solves (A1 (x) A2) vec(C) = vec(F) through the factor Cholesky solves.
 * F and C are row-major n x m with n = |X| grid rows, m = |Y| grid cols;
 * the grid linearization is (j,k) -> j*m + k. */
RKHS_API rkhs_status rkhs_kron_solve(const rkhs_gram* gram_x, const rkhs_gram* gram_y, const double* f,
                                     double* out_c);
RKHS_API rkhs_status rkhs_tensor_fit(const rkhs_kernel* k1, const rkhs_kernel* k2, const rkhs_points* grid_x,
                                     const rkhs_points* grid_y, const double* samples, rkhs_model** out);
RKHS_API rkhs_status rkhs_tensor_dual(const rkhs_gram* gram_x, const rkhs_gram* gram_y, size_t j, size_t k,
                                      rkhs_dual** out);
RKHS_API rkhs_status rkhs_tensor_riesz(const rkhs_gram* gram_x, const rkhs_gram* gram_y, double* lambda_min,
                                       double* lambda_max, double* condition);
/* Tensor sample matrix CSV: header "n,m", then n rows of m values. */
RKHS_API rkhs_status rkhs_matrix_read_csv(const char* path, double** out_data, size_t* out_n, size_t* out_m);
RKHS_API rkhs_status rkhs_matrix_write_csv(const double* data, size_t n, size_t m, const char* path);

typedef struct rkhs_bench_row {
  size_t n;
  size_t m;
  double t_tensor_ms;
  double t_dense_ms; /* NaN when skipped */
  double speedup;    /* NaN when skipped */
  int dense_skipped;
} rkhs_bench_row;

/* Factored vs dense solve timings on integer grids; the dense path is
 * skipped (marked) when n*m exceeds dense_budget. out_rows holds
 * size_count entries. */
RKHS_API rkhs_status rkhs_bench_run(const size_t* ns, const size_t* ms, size_t size_count, int trials,
                                    size_t dense_budget, rkhs_bench_row* out_rows);
RKHS_API rkhs_status rkhs_bench_write_csv(const rkhs_bench_row* rows, size_t count, const char* path);

/* Canonical shortest round-trip decimal formatting used in all emitted
 * files. Returns the string length, or -1 if the buffer is too small
 * (32 bytes always suffice). */
RKHS_API int rkhs_format_double(double value, char* buffer, size_t buffer_size);

#ifdef __cplusplus
}
#endif

#endif /* RKHS_H */
