#include "qrealize/qrealize.h"

#include <algorithm>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "cavity.hpp"
#include "error.hpp"
#include "lqg.hpp"
#include "realizability.hpp"
#include "tf_realization.hpp"

using namespace qrealize;

struct qr_system {
  StateSpace ss;
};

struct qr_realization {
  QuantumRealization qr;
  std::optional<RealizationWitness> witness;
  std::optional<SkewSolution> solution;
};

struct qr_plant {
  Plant plant;
};

struct qr_design {
  DesignResult result;
};

namespace {

thread_local std::string g_last_error;

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Failures detected by the API layer itself.
struct ApiError {
  qr_status status;
  std::string message;
};

[[noreturn]] void api_fail(qr_status s, std::string msg) { throw ApiError{s, std::move(msg)}; }

qr_status to_status(ErrorCode c) { return static_cast<qr_status>(static_cast<int>(c) + 1); }

template <class F>
qr_status guard(F&& f) noexcept {
  try {
    f();
    return QR_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const ApiError& e) {
    g_last_error = e.message;
    return e.status;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QR_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QR_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return QR_ERR_INTERNAL;
  }
}

template <class T>
void need(const T* p, const char* what) {
  if (p == nullptr) api_fail(QR_ERR_NULL_POINTER, std::string(what) + " is NULL");
}

RealMatrix load(const double* p, int rows, int cols, const char* what) {
  if (rows < 0 || cols < 0) fail(ErrorCode::InvalidArgument, std::string(what) + ": negative dimension");
  if (rows == 0 || cols == 0) return RealMatrix(rows, cols);
  need(p, what);
  return Eigen::Map<const RowMajor>(p, rows, cols);
}

Tolerances tolerances(const qr_tolerances* t) {
  Tolerances out;
  if (t != nullptr) {
    out.rank_rel = t->rank_rel;
    out.residual_abs = t->residual_abs;
    out.imag_axis_rel = t->imag_axis_rel;
  }
  out.validate();
  return out;
}

void store(const RealMatrix& m, double* out, size_t capacity, int* rows, int* cols) {
  if (rows != nullptr) *rows = static_cast<int>(m.rows());
  if (cols != nullptr) *cols = static_cast<int>(m.cols());
  if (out == nullptr) return;
  const auto size = static_cast<size_t>(m.size());
  if (capacity < size) api_fail(QR_ERR_BUFFER_TOO_SMALL, "output buffer too small");
  Eigen::Map<RowMajor>(out, m.rows(), m.cols()) = m;
}

void store(const ComplexMatrix& m, double* out, size_t capacity, int* rows, int* cols) {
  if (rows != nullptr) *rows = static_cast<int>(m.rows());
  if (cols != nullptr) *cols = static_cast<int>(m.cols());
  if (out == nullptr) return;
  if (capacity < 2 * static_cast<size_t>(m.size())) api_fail(QR_ERR_BUFFER_TOO_SMALL, "output buffer too small");
  size_t k = 0;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      out[k++] = m(i, j).real();
      out[k++] = m(i, j).imag();
    }
  }
}

RhoSearchConfig search_config(const qr_search* s) {
  if (s == nullptr) return RhoSearchConfig::defaults();
  RhoSearchConfig cfg = RhoSearchConfig::defaults();
  if (s->rho_grid != nullptr) cfg.grid.assign(s->rho_grid, s->rho_grid + s->rho_grid_len);
  cfg.refine_iters = s->refine_iters;
  cfg.validate();
  return cfg;
}

CavityParams cavity(const qr_cavity_params* cp) {
  need(cp, "cavity params");
  CavityParams out;
  out.gamma = cp->gamma;
  out.kappa1 = cp->kappa1;
  out.kappa2 = cp->kappa2;
  out.k_n = cp->k_n;
  out.validate();
  return out;
}

qr_sweep_row to_c(const SweepRow& r) {
  return {r.k_n, r.n_no_control, r.n_heterodyne, r.n_coherent, r.rho_star, static_cast<int>(r.n_v2)};
}

}  // namespace

extern "C" {

const char* qr_status_string(qr_status status) {
  switch (status) {
    case QR_OK: return "ok";
    case QR_ERR_NULL_POINTER: return "null pointer";
    case QR_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case QR_ERR_INTERNAL: return "internal error";
    default: break;
  }
  const int v = static_cast<int>(status);
  if (v >= 1 && v <= static_cast<int>(ErrorCode::IoError) + 1) return to_string(static_cast<ErrorCode>(v - 1));
  return "unknown status";
}

const char* qr_last_error(void) { return g_last_error.c_str(); }

const char* qr_version(void) { return "0.1.0"; }

qr_tolerances qr_tolerances_default(void) {
  const Tolerances t;
  return {t.rank_rel, t.residual_abs, t.imag_axis_rel};
}

qr_status qr_system_create(int n, int n_u, int n_y, const double* a, const double* bu, const double* c,
                           qr_system** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    auto sys = std::make_unique<qr_system>();
    sys->ss = StateSpace::from_matrices(load(a, n, n, "A"), load(bu, n, n_u, "Bu"), load(c, n_y, n, "C"));
    validate(sys->ss);
    *out = sys.release();
  });
}

void qr_system_destroy(qr_system* sys) { delete sys; }

qr_status qr_system_dims(const qr_system* sys, int* n, int* n_u, int* n_y) {
  return guard([&] {
    need(sys, "system");
    if (n != nullptr) *n = static_cast<int>(sys->ss.n);
    if (n_u != nullptr) *n_u = static_cast<int>(sys->ss.n_u);
    if (n_y != nullptr) *n_y = static_cast<int>(sys->ss.n_y);
  });
}

qr_status qr_s_tilde(const qr_system* sys, double* out, size_t capacity) {
  return guard([&] {
    need(sys, "system");
    need(out, "out");
    store(s_tilde(sys->ss), out, capacity, nullptr, nullptr);
  });
}

qr_status qr_noise_requirement(const qr_system* sys, const qr_tolerances* tol, int* n_v1, int* n_v2) {
  return guard([&] {
    need(sys, "system");
    const NoiseCount nc = noise_requirement(sys->ss, tolerances(tol));
    if (n_v1 != nullptr) *n_v1 = static_cast<int>(nc.n_v1);
    if (n_v2 != nullptr) *n_v2 = static_cast<int>(nc.n_v2);
  });
}

qr_status qr_feedthrough_noise(const qr_system* sys, double* out, size_t capacity) {
  return guard([&] {
    need(sys, "system");
    need(out, "out");
    store(feedthrough_noise_matrix(sys->ss), out, capacity, nullptr, nullptr);
  });
}

qr_status qr_tf_eval(const qr_system* sys, double s_re, double s_im, double* out, size_t capacity) {
  return guard([&] {
    need(sys, "system");
    need(out, "out");
    store(tf_eval(sys->ss, Complex(s_re, s_im)), out, capacity, nullptr, nullptr);
  });
}

qr_status qr_realization_create(const qr_system* sys, const double* bv1, int n_v2, const double* bv2,
                                qr_realization** out) {
  return guard([&] {
    need(sys, "system");
    need(out, "out");
    *out = nullptr;
    auto r = std::make_unique<qr_realization>();
    r->qr.ss = sys->ss;
    r->qr.bv1 = load(bv1, static_cast<int>(sys->ss.n), static_cast<int>(sys->ss.n_u), "Bv1");
    r->qr.bv2 = load(bv2, static_cast<int>(sys->ss.n), n_v2, "Bv2");
    *out = r.release();
  });
}

void qr_realization_destroy(qr_realization* r) { delete r; }

qr_status qr_realization_info_get(const qr_realization* r, qr_realization_info* info) {
  return guard([&] {
    need(r, "realization");
    need(info, "info");
    info->n = static_cast<int>(r->qr.ss.n);
    info->n_u = static_cast<int>(r->qr.ss.n_u);
    info->n_y = static_cast<int>(r->qr.ss.n_y);
    info->n_v1 = static_cast<int>(r->qr.n_v1());
    info->n_v2 = static_cast<int>(r->qr.n_v2());
    info->has_witness = r->witness.has_value() ? 1 : 0;
    info->has_tf_solution = r->solution.has_value() ? 1 : 0;
    info->x1_condition = r->solution ? r->solution->x1_condition : 0.0;
  });
}

qr_status qr_realization_matrix(const qr_realization* r, qr_matrix which, double* out, size_t capacity,
                                int* rows, int* cols) {
  return guard([&] {
    need(r, "realization");
    const RealMatrix* m = nullptr;
    switch (which) {
      case QR_MAT_A: m = &r->qr.ss.a; break;
      case QR_MAT_BU: m = &r->qr.ss.bu; break;
      case QR_MAT_C: m = &r->qr.ss.c; break;
      case QR_MAT_BV1: m = &r->qr.bv1; break;
      case QR_MAT_BV2: m = &r->qr.bv2; break;
      case QR_MAT_R:
        if (!r->witness) fail(ErrorCode::InvalidArgument, "realization has no witness");
        m = &r->witness->r;
        break;
      case QR_MAT_X:
      case QR_MAT_T:
        if (!r->solution) fail(ErrorCode::InvalidArgument, "realization has no Riccati solution");
        m = which == QR_MAT_X ? &r->solution->x : &r->solution->t;
        break;
      default:
        fail(ErrorCode::InvalidArgument, "unknown matrix selector");
    }
    store(*m, out, capacity, rows, cols);
  });
}

qr_status qr_realization_lambda(const qr_realization* r, double* out, size_t capacity, int* rows, int* cols) {
  return guard([&] {
    need(r, "realization");
    if (!r->witness) fail(ErrorCode::InvalidArgument, "realization has no witness");
    store(r->witness->lambda(), out, capacity, rows, cols);
  });
}

qr_status qr_check_realizable(const qr_realization* r, const qr_tolerances* tol, qr_report* report) {
  return guard([&] {
    need(r, "realization");
    need(report, "report");
    const RealizabilityReport rep = check_realizable(r->qr, tolerances(tol));
    report->realizable = rep.realizable ? 1 : 0;
    report->residual_dynamics = rep.residual_dynamics;
    report->residual_feedthrough = rep.residual_feedthrough;
  });
}

qr_status qr_realize_minimal(const qr_system* sys, const qr_tolerances* tol, int conservative,
                             qr_realization** out) {
  return guard([&] {
    need(sys, "system");
    need(out, "out");
    *out = nullptr;
    MinimalRealization m = realize_minimal(sys->ss, tolerances(tol),
                                           conservative ? RankPolicy::Conservative : RankPolicy::Strict);
    auto r = std::make_unique<qr_realization>();
    r->qr = std::move(m.realization);
    r->witness = std::move(m.witness);
    *out = r.release();
  });
}

qr_status qr_realize_tf(const qr_system* sys, const qr_tolerances* tol, qr_realization** out,
                        qr_status* cause) {
  if (cause != nullptr) *cause = QR_OK;
  return guard([&] {
    need(sys, "system");
    need(out, "out");
    *out = nullptr;
    try {
      TfRealization t = realize_tf(sys->ss, tolerances(tol));
      auto r = std::make_unique<qr_realization>();
      r->qr = std::move(t.realization);
      r->witness = std::move(t.witness);
      r->solution = std::move(t.solution);
      *out = r.release();
    } catch (const Error& e) {
      if (cause != nullptr && e.cause()) *cause = to_status(*e.cause());
      throw;
    }
  });
}

qr_status qr_plant_create(int n, int n_u, int n_y, int n_w1, const double* a, const double* bu,
                          const double* bw1, const double* c, const double* du, const double* dw1,
                          const double* s_w1, qr_plant** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    auto p = std::make_unique<qr_plant>();
    p->plant.a = load(a, n, n, "A");
    p->plant.bu = load(bu, n, n_u, "Bu");
    p->plant.bw1 = load(bw1, n, n_w1, "Bw1");
    p->plant.c = load(c, n_y, n, "C");
    p->plant.du = load(du, n_y, n_u, "Du");
    p->plant.dw1 = load(dw1, n_y, n_w1, "Dw1");
    p->plant.s_w1 = load(s_w1, n_w1, n_w1, "Sw1");
    validate(p->plant);
    *out = p.release();
  });
}

void qr_plant_destroy(qr_plant* p) { delete p; }

qr_search qr_search_default(void) {
  qr_search s;
  s.rho_grid = nullptr;
  s.rho_grid_len = 0;
  s.refine_iters = RhoSearchConfig::defaults().refine_iters;
  return s;
}

qr_design_options qr_design_options_default(void) {
  qr_design_options o;
  o.r1 = nullptr;
  o.r2_design = nullptr;
  o.r2_eval = nullptr;
  o.s_v1 = nullptr;
  o.search = qr_search_default();
  return o;
}

qr_status qr_design_run(const qr_plant* p, const qr_design_options* opts, const qr_tolerances* tol,
                        qr_design** out) {
  return guard([&] {
    need(p, "plant");
    need(out, "out");
    *out = nullptr;
    const qr_design_options o = opts != nullptr ? *opts : qr_design_options_default();
    const int n = static_cast<int>(p->plant.n());
    const int n_u = static_cast<int>(p->plant.n_u());
    DesignWeights w;
    w.r1 = o.r1 ? load(o.r1, n, n, "R1") : RealMatrix::Identity(n, n);
    w.r2_design = o.r2_design ? load(o.r2_design, n_u, n_u, "R2 (design)") : RealMatrix(1e-6 * RealMatrix::Identity(n_u, n_u));
    w.r2_eval = o.r2_eval ? load(o.r2_eval, n_u, n_u, "R2 (evaluation)") : RealMatrix::Zero(n_u, n_u);
    w.s_v1 = o.s_v1 ? load(o.s_v1, n_u, n_u, "Sv1") : RealMatrix::Identity(n_u, n_u);
    auto d = std::make_unique<qr_design>();
    d->result = design(p->plant, w, search_config(&o.search), tolerances(tol));
    *out = d.release();
  });
}

void qr_design_destroy(qr_design* d) { delete d; }

qr_status qr_design_summary_get(const qr_design* d, qr_design_summary* out) {
  return guard([&] {
    need(d, "design");
    need(out, "out");
    out->rho_star = d->result.rho_star;
    out->j = d->result.j;
    out->used_tf_path = d->result.used_tf_path ? 1 : 0;
    out->n_v2 = static_cast<int>(d->result.controller.n_v2());
    out->n_evaluations = d->result.evaluations.size();
  });
}

qr_status qr_design_evaluation(const qr_design* d, size_t index, qr_rho_evaluation* out) {
  return guard([&] {
    need(d, "design");
    need(out, "out");
    if (index >= d->result.evaluations.size()) fail(ErrorCode::InvalidArgument, "evaluation index out of range");
    const RhoEvaluation& e = d->result.evaluations[index];
    out->rho = e.rho;
    out->accepted = e.accepted ? 1 : 0;
    out->j = e.j;
    out->used_tf_path = e.used_tf_path ? 1 : 0;
    out->n_v2 = static_cast<int>(e.n_v2);
  });
}

qr_status qr_design_controller(const qr_design* d, qr_realization** out) {
  return guard([&] {
    need(d, "design");
    need(out, "out");
    auto r = std::make_unique<qr_realization>();
    r->qr = d->result.controller;
    *out = r.release();
  });
}

qr_status qr_design_aux_matrix(const qr_design* d, qr_aux_matrix which, double* out, size_t capacity,
                               int* rows, int* cols) {
  return guard([&] {
    need(d, "design");
    const AuxController& k = d->result.aux;
    const RealMatrix* m = nullptr;
    switch (which) {
      case QR_AUX_A_K: m = &k.a_k; break;
      case QR_AUX_B_Y: m = &k.b_y; break;
      case QR_AUX_C_K: m = &k.c_k; break;
      case QR_AUX_F: m = &k.f; break;
      case QR_AUX_K: m = &k.k; break;
      case QR_AUX_P: m = &k.p; break;
      case QR_AUX_Q: m = &k.q; break;
      default: fail(ErrorCode::InvalidArgument, "unknown matrix selector");
    }
    store(*m, out, capacity, rows, cols);
  });
}

qr_cavity_params qr_cavity_params_default(void) {
  const CavityParams cp;
  return {cp.gamma, cp.kappa1, cp.kappa2, cp.k_n};
}

qr_status qr_cavity_no_control(const qr_cavity_params* cp, double* n_photons) {
  return guard([&] {
    need(n_photons, "out");
    *n_photons = no_control_photons(cavity(cp));
  });
}

qr_status qr_cavity_heterodyne(const qr_cavity_params* cp, double r2_design, double* n_photons) {
  return guard([&] {
    need(n_photons, "out");
    *n_photons = heterodyne_photons(cavity(cp), r2_design);
  });
}

qr_status qr_cavity_sweep_row(const qr_cavity_params* cp, const qr_search* search, double r2_design,
                              const qr_tolerances* tol, qr_sweep_row* out) {
  return guard([&] {
    need(out, "out");
    *out = to_c(sweep_row(cavity(cp), search_config(search), r2_design, tolerances(tol)));
  });
}

qr_status qr_cavity_run_sweep(const qr_cavity_params* cp, const double* kn_grid, size_t kn_len,
                              const qr_search* search, double r2_design, const qr_tolerances* tol,
                              const char* csv_path, qr_sweep_row* rows, size_t rows_capacity,
                              size_t* n_rows) {
  return guard([&] {
    need(csv_path, "csv_path");
    const std::vector<double> grid =
        kn_grid != nullptr ? std::vector<double>(kn_grid, kn_grid + kn_len) : default_kn_grid();
    const std::vector<SweepRow> result =
        run_sweep(cavity(cp), grid, search_config(search), r2_design, tolerances(tol));
    write_sweep_csv(result, csv_path);
    if (n_rows != nullptr) *n_rows = result.size();
    if (rows != nullptr) {
      for (size_t i = 0; i < result.size() && i < rows_capacity; ++i) rows[i] = to_c(result[i]);
    }
  });
}

qr_status qr_spaced_grid(double lo, double hi, int n, double* out, size_t capacity) {
  return guard([&] {
    need(out, "out");
    const std::vector<double> g = spaced_grid(lo, hi, n);
    if (capacity < g.size()) api_fail(QR_ERR_BUFFER_TOO_SMALL, "output buffer too small");
    std::copy(g.begin(), g.end(), out);
  });
}

qr_status qr_default_kn_grid(double* out, size_t capacity, size_t* len) {
  return guard([&] {
    const std::vector<double> g = default_kn_grid();
    if (len != nullptr) *len = g.size();
    if (out == nullptr) return;
    if (capacity < g.size()) api_fail(QR_ERR_BUFFER_TOO_SMALL, "output buffer too small");
    std::copy(g.begin(), g.end(), out);
  });
}

}  // extern "C"
