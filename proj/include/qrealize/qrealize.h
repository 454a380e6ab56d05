#ifndef QREALIZE_QREALIZE_H
#define QREALIZE_QREALIZE_H

/*
 * C interface to the qrealize library: physical realizability of linear
 * quantum systems, zero-additional-noise realizations, and coherent LQG.
 *
 * Conventions:
 *  - Matrices are dense, row-major doubles. Complex matrices are stored as
 *    interleaved (re, im) pairs, also row-major.
 *  - Every function returns a qr_status. On failure a message is available
 *    from qr_last_error() on the same thread.
 *  - Handles are opaque and owned by the caller once created; destroy
 *    functions accept NULL.
 *  - Matrix getters write rows/cols (if non-NULL) and then copy into `out`.
 *    Passing out = NULL only queries the shape. A non-NULL `out` with
 *    capacity < rows*cols (times 2 for complex) gives QR_ERR_BUFFER_TOO_SMALL.
 *  - A NULL qr_tolerances pointer means qr_tolerances_default().
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(QR_BUILDING_LIBRARY)
#    define QR_API __declspec(dllexport)
#  else
#    define QR_API __declspec(dllimport)
#  endif
#else
#  define QR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qr_status {
  QR_OK = 0,
  QR_ERR_INVALID_ARGUMENT = 1,
  QR_ERR_ODD_DIMENSION = 2,
  QR_ERR_DIMENSION_MISMATCH = 3,
  QR_ERR_NON_SQUARE_IO = 4,
  QR_ERR_NOT_HERMITIAN = 5,
  QR_ERR_NOT_SKEW_SYMMETRIC = 6,
  QR_ERR_NOT_HURWITZ = 7,
  QR_ERR_NO_STABILIZING_SOLUTION = 8,
  QR_ERR_NOT_PSD = 9,
  QR_ERR_RANK_MISMATCH = 10,
  QR_ERR_NUMERICAL_RANK_AMBIGUITY = 11,
  QR_ERR_IMAGINARY_AXIS_EIGENVALUE = 12,
  QR_ERR_SINGULAR_X1 = 13,
  QR_ERR_SINGULAR_X = 14,
  QR_ERR_NON_REAL_RESIDUE = 15,
  QR_ERR_NOT_REALIZABLE_WITHOUT_EXTRA_NOISE = 16,
  QR_ERR_SINGULAR_RESOLVENT = 17,
  QR_ERR_SINGULAR_V2 = 18,
  QR_ERR_SINGULAR_R2 = 19,
  QR_ERR_ALL_CANDIDATES_REJECTED = 20,
  QR_ERR_INVALID_PARAMETER = 21,
  QR_ERR_IO = 22,
  QR_ERR_NULL_POINTER = 100,
  QR_ERR_BUFFER_TOO_SMALL = 101,
  QR_ERR_INTERNAL = 102
} qr_status;

QR_API const char* qr_status_string(qr_status status);
/* Message of the last failure on this thread ("" if none). */
QR_API const char* qr_last_error(void);
QR_API const char* qr_version(void);

typedef struct qr_tolerances {
  double rank_rel;
  double residual_abs;
  double imag_axis_rel;
} qr_tolerances;

QR_API qr_tolerances qr_tolerances_default(void);

/* ---- strictly proper systems dx = A x dt + Bu du, dy = C x dt ---- */

typedef struct qr_system qr_system;

QR_API qr_status qr_system_create(int n, int n_u, int n_y, const double* a, const double* bu,
                                  const double* c, qr_system** out);
QR_API void qr_system_destroy(qr_system* sys);
QR_API qr_status qr_system_dims(const qr_system* sys, int* n, int* n_u, int* n_y);

/* n x n skew-symmetric matrix whose rank is the number of additional noises. */
QR_API qr_status qr_s_tilde(const qr_system* sys, double* out, size_t capacity);
QR_API qr_status qr_noise_requirement(const qr_system* sys, const qr_tolerances* tol, int* n_v1,
                                      int* n_v2);
/* Direct-feedthrough noise matrix Bv1 = Theta C^T diag(J), n x n_u. */
QR_API qr_status qr_feedthrough_noise(const qr_system* sys, double* out, size_t capacity);
/* C (sI - A)^-1 Bu, n_y x n_u complex. */
QR_API qr_status qr_tf_eval(const qr_system* sys, double s_re, double s_im, double* out,
                            size_t capacity);

/* ---- quantum realizations (system + noise matrices + optional witness) ---- */

typedef struct qr_realization qr_realization;

typedef enum qr_matrix {
  QR_MAT_A = 0,
  QR_MAT_BU = 1,
  QR_MAT_C = 2,
  QR_MAT_BV1 = 3,
  QR_MAT_BV2 = 4,
  QR_MAT_R = 5, /* witness Hamiltonian */
  QR_MAT_X = 6, /* skew Riccati solution (realize_tf only) */
  QR_MAT_T = 7  /* coordinate transformation (realize_tf only) */
} qr_matrix;

typedef struct qr_realization_info {
  int n, n_u, n_y, n_v1, n_v2;
  int has_witness;
  int has_tf_solution;
  double x1_condition;
} qr_realization_info;

typedef struct qr_report {
  int realizable;
  double residual_dynamics;
  double residual_feedthrough;
} qr_report;

/* Wraps given noise matrices around a system, e.g. for qr_check_realizable.
 * bv1 is n x n_u. bv2 is n x n_v2 and may be NULL when n_v2 = 0. */
QR_API qr_status qr_realization_create(const qr_system* sys, const double* bv1, int n_v2,
                                       const double* bv2, qr_realization** out);
QR_API void qr_realization_destroy(qr_realization* r);
QR_API qr_status qr_realization_info_get(const qr_realization* r, qr_realization_info* info);
QR_API qr_status qr_realization_matrix(const qr_realization* r, qr_matrix which, double* out,
                                       size_t capacity, int* rows, int* cols);
/* Stacked coupling matrix [Lambda_b0; Lambda_b1; Lambda_b2], complex. */
QR_API qr_status qr_realization_lambda(const qr_realization* r, double* out, size_t capacity,
                                       int* rows, int* cols);

QR_API qr_status qr_check_realizable(const qr_realization* r, const qr_tolerances* tol,
                                     qr_report* report);
/* Minimal-noise realization. conservative != 0 resolves rank ambiguity by
 * counting borderline eigenvalues instead of failing. */
QR_API qr_status qr_realize_minimal(const qr_system* sys, const qr_tolerances* tol, int conservative,
                                    qr_realization** out);
/* Zero-additional-noise realization. On QR_ERR_NOT_REALIZABLE_WITHOUT_EXTRA_NOISE
 * `cause` (if non-NULL) receives the underlying reason, otherwise QR_OK. */
QR_API qr_status qr_realize_tf(const qr_system* sys, const qr_tolerances* tol, qr_realization** out,
                               qr_status* cause);

/* ---- coherent LQG design ---- */

typedef struct qr_plant qr_plant;

QR_API qr_status qr_plant_create(int n, int n_u, int n_y, int n_w1, const double* a, const double* bu,
                                 const double* bw1, const double* c, const double* du,
                                 const double* dw1, const double* s_w1, qr_plant** out);
QR_API void qr_plant_destroy(qr_plant* p);

typedef struct qr_search {
  const double* rho_grid; /* NULL: {0} plus 41 log-spaced points in [1e-4, 1e4] */
  size_t rho_grid_len;
  int refine_iters;       /* golden-section steps around the best grid point */
} qr_search;

typedef struct qr_design_options {
  const double* r1;        /* n x n, NULL: identity */
  const double* r2_design; /* n_u x n_u, NULL: 1e-6 * identity */
  const double* r2_eval;   /* n_u x n_u, NULL: zero */
  const double* s_v1;      /* n_u x n_u, NULL: identity */
  qr_search search;
} qr_design_options;

QR_API qr_search qr_search_default(void);
QR_API qr_design_options qr_design_options_default(void);

typedef struct qr_design qr_design;

typedef struct qr_design_summary {
  double rho_star;
  double j;
  int used_tf_path;
  int n_v2;
  size_t n_evaluations;
} qr_design_summary;

typedef struct qr_rho_evaluation {
  double rho;
  int accepted;
  double j;
  int used_tf_path;
  int n_v2;
} qr_rho_evaluation;

typedef enum qr_aux_matrix {
  QR_AUX_A_K = 0,
  QR_AUX_B_Y = 1,
  QR_AUX_C_K = 2,
  QR_AUX_F = 3,
  QR_AUX_K = 4,
  QR_AUX_P = 5,
  QR_AUX_Q = 6
} qr_aux_matrix;

QR_API qr_status qr_design_run(const qr_plant* p, const qr_design_options* opts,
                               const qr_tolerances* tol, qr_design** out);
QR_API void qr_design_destroy(qr_design* d);
QR_API qr_status qr_design_summary_get(const qr_design* d, qr_design_summary* out);
QR_API qr_status qr_design_evaluation(const qr_design* d, size_t index, qr_rho_evaluation* out);
/* New handle with the winning controller's realization; caller destroys it. */
QR_API qr_status qr_design_controller(const qr_design* d, qr_realization** out);
QR_API qr_status qr_design_aux_matrix(const qr_design* d, qr_aux_matrix which, double* out,
                                      size_t capacity, int* rows, int* cols);

/* ---- optical cavity study ---- */

typedef struct qr_cavity_params {
  double gamma;
  double kappa1;
  double kappa2;
  double k_n;
} qr_cavity_params;

typedef struct qr_sweep_row {
  double k_n;
  double n_no_control;
  double n_heterodyne;
  double n_coherent;
  double rho_star;
  int n_v2;
} qr_sweep_row;

QR_API qr_cavity_params qr_cavity_params_default(void);
QR_API qr_status qr_cavity_no_control(const qr_cavity_params* cp, double* n_photons);
QR_API qr_status qr_cavity_heterodyne(const qr_cavity_params* cp, double r2_design, double* n_photons);
QR_API qr_status qr_cavity_sweep_row(const qr_cavity_params* cp, const qr_search* search,
                                     double r2_design, const qr_tolerances* tol, qr_sweep_row* out);
/* Runs the sweep (kn_grid NULL: default grid) and writes the CSV to
 * csv_path. If rows is non-NULL, up to rows_capacity rows are also copied
 * out; n_rows (if non-NULL) receives the total row count. */
QR_API qr_status qr_cavity_run_sweep(const qr_cavity_params* cp, const double* kn_grid, size_t kn_len,
                                     const qr_search* search, double r2_design,
                                     const qr_tolerances* tol, const char* csv_path, qr_sweep_row* rows,
                                     size_t rows_capacity, size_t* n_rows);

/* n points from lo to hi: log-spaced when lo > 0, linear when lo = 0. */
QR_API qr_status qr_spaced_grid(double lo, double hi, int n, double* out, size_t capacity);
QR_API qr_status qr_default_kn_grid(double* out, size_t capacity, size_t* len);

#ifdef __cplusplus
}
#endif

#endif /* QREALIZE_QREALIZE_H */
