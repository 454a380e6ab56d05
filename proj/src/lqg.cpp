#include "lqg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "error.hpp"

namespace qrealize {

namespace {

void require_shape(const RealMatrix& m, Index rows, Index cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    fail(ErrorCode::DimensionMismatch, std::string(what) + " must be " + std::to_string(rows) + " x " +
                                           std::to_string(cols));
  }
}

// Failures that reject one ρ candidate instead of aborting the whole search.
bool rejects_candidate(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHurwitz:
    case ErrorCode::NoStabilizingSolution:
    case ErrorCode::NumericalRankAmbiguity:
    case ErrorCode::NonRealResidue:
    case ErrorCode::NotRealizableWithoutExtraNoise:
    case ErrorCode::ImaginaryAxisEigenvalue:
    case ErrorCode::SingularX:
    case ErrorCode::SingularX1:
      return true;
    default:
      return false;
  }
}

struct Candidate {
  RhoEvaluation eval;
  QuantumRealization controller;
  AuxController aux;
};

}  // namespace

void validate(const Plant& p) {
  const Index n = p.n(), n_u = p.n_u(), n_y = p.n_y(), n_w = p.n_w1();
  if (n <= 0 || n_u <= 0 || n_y <= 0) fail(ErrorCode::InvalidArgument, "plant dimensions must be positive");
  for (Index d : {n, n_u, n_y, n_w}) {
    if (d % 2 != 0) fail(ErrorCode::OddDimension, "plant dimensions must be even");
  }
  require_shape(p.a, n, n, "A");
  require_shape(p.bu, n, n_u, "Bu");
  require_shape(p.bw1, n, n_w, "Bw1");
  require_shape(p.c, n_y, n, "C");
  require_shape(p.du, n_y, n_u, "Du");
  require_shape(p.dw1, n_y, n_w, "Dw1");
  require_shape(p.s_w1, n_w, n_w, "Sw1");
  if (n_y != n_u) fail(ErrorCode::NonSquareInputOutput, "plant must have n_y = n_u");
}

RhoSearchConfig RhoSearchConfig::defaults() {
  RhoSearchConfig cfg;
  cfg.grid.push_back(0.0);
  constexpr int kPoints = 41;
  for (int i = 0; i < kPoints; ++i) {
    cfg.grid.push_back(std::pow(10.0, -4.0 + 8.0 * i / (kPoints - 1)));
  }
  cfg.refine_iters = 20;
  return cfg;
}

void RhoSearchConfig::validate() const {
  if (grid.empty()) fail(ErrorCode::InvalidParameter, "rho grid must not be empty");
  for (double rho : grid) {
    if (!(rho >= 0.0) || !std::isfinite(rho)) fail(ErrorCode::InvalidParameter, "rho values must be finite and >= 0");
  }
  if (refine_iters < 0) fail(ErrorCode::InvalidParameter, "refine_iters must be >= 0");
}

AuxController classical_lqg(const RealMatrix& a, const RealMatrix& bu, const RealMatrix& c,
                            const RealMatrix& du, const RealMatrix& g, const RealMatrix& h,
                            const RealMatrix& s_noise, const RealMatrix& r1, const RealMatrix& r2,
                            const Tolerances& tol) {
  const Index n = a.rows();
  const Index n_y = c.rows();
  require_shape(r1, n, n, "R1");
  require_shape(r2, bu.cols(), bu.cols(), "R2");
  require_shape(s_noise, g.cols(), g.cols(), "noise intensity");
  require_shape(h, n_y, g.cols(), "noise feedthrough");

  Eigen::LLT<RealMatrix> r2_llt(symmetrize(r2));
  if (r2_llt.info() != Eigen::Success || (r2 - r2.transpose()).norm() > tol.residual_abs * r2.norm()) {
    fail(ErrorCode::SingularR2, "control weight must be symmetric positive definite");
  }

  AuxController out;
  out.p = solve_care(a, bu, r1, r2, tol);
  out.f = r2_llt.solve(bu.transpose() * out.p);

  RealMatrix gh(n + n_y, g.cols());
  gh << g, h;
  const RealMatrix v = gh * s_noise * gh.transpose();
  const RealMatrix v1 = v.topLeftCorner(n, n);
  const RealMatrix v12 = v.topRightCorner(n, n_y);
  const RealMatrix v2 = symmetrize(v.bottomRightCorner(n_y, n_y));
  Eigen::LLT<RealMatrix> v2_llt(v2);
  if (v2_llt.info() != Eigen::Success) fail(ErrorCode::SingularV2, "measurement noise intensity V2 is singular");

  const RealMatrix v12_v2inv = v2_llt.solve(v12.transpose()).transpose();
  const RealMatrix a_f = a - v12_v2inv * c;
  const RealMatrix q_f = symmetrize(v1 - v12_v2inv * v12.transpose());
  out.q = solve_care(a_f.transpose(), c.transpose(), q_f, v2, tol);
  out.k = v2_llt.solve((out.q * c.transpose() + v12).transpose()).transpose();

  out.a_k = a - out.k * c - bu * out.f + out.k * du * out.f;
  out.b_y = out.k;
  out.c_k = -out.f;
  return out;
}

AuxController aux_lqg(const Plant& p, const RealMatrix& r1, const RealMatrix& r2,
                      const RealMatrix& s_v1, double rho, const Tolerances& tol) {
  validate(p);
  if (!(rho >= 0.0) || !std::isfinite(rho)) fail(ErrorCode::InvalidParameter, "rho must be finite and >= 0");
  require_shape(s_v1, p.n_u(), p.n_u(), "Sv1");
  RealMatrix g(p.n(), p.n_w1() + p.n_u());
  g << p.bw1, p.bu;
  RealMatrix h(p.n_y(), p.n_w1() + p.n_u());
  h << p.dw1, p.du;
  return classical_lqg(p.a, p.bu, p.c, p.du, g, h, block_diag({p.s_w1, s_v1}), r1, (1.0 + rho) * r2, tol);
}

ControllerRealization realize_controller(const AuxController& k, const Tolerances& tol) {
  const StateSpace ss = k.as_state_space();
  validate(ss);
  try {
    return {realize_tf(ss, tol).realization, true};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotRealizableWithoutExtraNoise) throw;
  }
  return {realize_minimal(ss, tol, RankPolicy::Conservative).realization, false};
}

ClosedLoop closed_loop(const Plant& p, const QuantumRealization& qc, const RealMatrix& r1,
                       const RealMatrix& r2) {
  validate(p);
  const RealMatrix& a_k = qc.ss.a;
  const RealMatrix& b_y = qc.ss.bu;
  const RealMatrix& c_k = qc.ss.c;
  const Index n = p.n(), n_k = a_k.rows();
  const Index n_v1 = qc.bv1.cols(), n_v2 = qc.bv2.cols();
  require_shape(a_k, n_k, n_k, "controller A_K");
  require_shape(b_y, n_k, p.n_y(), "controller B_y");
  require_shape(c_k, p.n_u(), n_k, "controller C_K");
  require_shape(qc.bv1, n_k, n_v1, "controller Bv1");
  if (n_v1 != p.n_u()) fail(ErrorCode::DimensionMismatch, "controller must have n_v1 = n_u noises");
  require_shape(qc.bv2, n_k, n_v2, "controller Bv2");
  require_shape(r1, n, n, "R1");
  require_shape(r2, p.n_u(), p.n_u(), "R2");

  ClosedLoop cl;
  cl.a_cl.resize(n + n_k, n + n_k);
  cl.a_cl << p.a, p.bu * c_k, b_y * p.c, a_k + b_y * p.du * c_k;

  cl.b_cl = RealMatrix::Zero(n + n_k, p.n_w1() + n_v1 + n_v2);
  cl.b_cl.block(0, 0, n, p.n_w1()) = p.bw1;
  cl.b_cl.block(0, p.n_w1(), n, n_v1) = p.bu;
  cl.b_cl.block(n, 0, n_k, p.n_w1()) = b_y * p.dw1;
  cl.b_cl.block(n, p.n_w1(), n_k, n_v1) = b_y * p.du + qc.bv1;
  cl.b_cl.block(n, p.n_w1() + n_v1, n_k, n_v2) = qc.bv2;

  cl.s_wcl = block_diag({p.s_w1, RealMatrix::Identity(n_v1, n_v1), RealMatrix::Identity(n_v2, n_v2)});
  cl.r_bar = block_diag({r1, c_k.transpose() * r2 * c_k});
  return cl;
}

double cost(const ClosedLoop& cl, const Tolerances& tol) {
  const Index n = cl.a_cl.rows();
  require_shape(cl.a_cl, n, n, "closed-loop A");
  require_shape(cl.b_cl, n, cl.s_wcl.rows(), "closed-loop B");
  require_shape(cl.s_wcl, cl.s_wcl.rows(), cl.s_wcl.rows(), "closed-loop noise intensity");
  require_shape(cl.r_bar, n, n, "closed-loop weight");
  const RealMatrix q = solve_lyapunov(cl.a_cl, cl.b_cl * cl.s_wcl * cl.b_cl.transpose(), tol);
  return (cl.r_bar * q).trace();
}

DesignResult design(const Plant& p, const DesignWeights& weights, const RhoSearchConfig& search,
                    const Tolerances& tol) {
  validate(p);
  search.validate();
  tol.validate();

  std::vector<RhoEvaluation> log;
  std::optional<Candidate> best;

  auto evaluate = [&](double rho) -> double {
    Candidate cand;
    cand.eval.rho = rho;
    try {
      cand.aux = aux_lqg(p, weights.r1, weights.r2_design, weights.s_v1, rho, tol);
      const ControllerRealization real = realize_controller(cand.aux, tol);
      cand.controller = real.controller;
      cand.eval.used_tf_path = real.used_tf_path;
      cand.eval.n_v2 = real.controller.n_v2();
      cand.eval.j = cost(closed_loop(p, real.controller, weights.r1, weights.r2_eval), tol);
      cand.eval.accepted = std::isfinite(cand.eval.j);
    } catch (const Error& e) {
      if (!rejects_candidate(e.code())) throw;
      cand.eval.accepted = false;
    }
    log.push_back(cand.eval);
    if (!cand.eval.accepted) return std::numeric_limits<double>::infinity();
    if (!best || cand.eval.j < best->eval.j) best = std::move(cand);
    return log.back().j;
  };

  for (double rho : search.grid) evaluate(rho);
  if (!best) fail(ErrorCode::AllCandidatesRejected, "no rho in the search grid yields a stable closed loop");

  // Golden-section refinement between the neighbours of the best grid point.
  std::vector<double> sorted = search.grid;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), best->eval.rho);
  const std::size_t pos = static_cast<std::size_t>(it - sorted.begin());
  const double lo = sorted[pos == 0 ? 0 : pos - 1];
  const double hi = sorted[std::min(pos + 1, sorted.size() - 1)];
  if (search.refine_iters > 0 && hi > lo) {
    const bool log_scale = lo > 0.0;
    auto to_rho = [&](double u) { return log_scale ? std::exp(u) : u; };
    double a = log_scale ? std::log(lo) : lo;
    double b = log_scale ? std::log(hi) : hi;
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - ratio * (b - a);
    double x2 = a + ratio * (b - a);
    double f1 = evaluate(to_rho(x1));
    double f2 = evaluate(to_rho(x2));
    for (int it_count = 0; it_count < search.refine_iters; ++it_count) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - ratio * (b - a);
        f1 = evaluate(to_rho(x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + ratio * (b - a);
        f2 = evaluate(to_rho(x2));
      }
    }
  }

  DesignResult out;
  out.rho_star = best->eval.rho;
  out.j = best->eval.j;
  out.used_tf_path = best->eval.used_tf_path;
  out.controller = std::move(best->controller);
  out.aux = std::move(best->aux);
  out.evaluations = std::move(log);
  return out;
}

}  // namespace qrealize
