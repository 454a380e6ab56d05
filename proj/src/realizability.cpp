#include "realizability.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "error.hpp"

namespace qrealize {

namespace {

const Complex kI(0.0, 1.0);

// Re(m) after checking that Im(m) is roundoff.
RealMatrix real_part(const ComplexMatrix& m, const Tolerances& tol, const char* what) {
  const RealMatrix re = m.real();
  if (m.imag().norm() > tol.residual_abs * std::max(1.0, re.norm())) {
    fail(ErrorCode::NonRealResidue, std::string(what) + " has a non-negligible imaginary part");
  }
  return re;
}

// 2iΘ[−Λ†, Λᵀ]Γ for a stacked coupling matrix Λ (rows = half the noise count).
ComplexMatrix noise_matrix(const ComplexMatrix& lambda) {
  const Index n = lambda.cols();
  const Index pairs = lambda.rows();
  ComplexMatrix stacked(n, 2 * pairs);
  stacked << -lambda.adjoint(), lambda.transpose();
  return 2.0 * kI * theta(n).cast<Complex>() * stacked * gamma(2 * pairs);
}

}  // namespace

RealMatrix s_tilde(const StateSpace& ss) {
  validate(ss);
  const RealMatrix th = theta(ss.n);
  const RealMatrix s = th * ss.bu * theta(ss.n_u) * ss.bu.transpose() * th - th * ss.a -
                       ss.a.transpose() * th - ss.c.transpose() * theta(ss.n_y) * ss.c;
  return antisymmetrize(s);
}

double s_tilde_scale(const StateSpace& ss) {
  return ss.bu.squaredNorm() + 2.0 * ss.a.norm() + ss.c.squaredNorm();
}

NoiseCount noise_requirement(const StateSpace& ss, const Tolerances& tol) {
  const RealMatrix s = s_tilde(ss);
  return {ss.n_u, rank_skew(s, tol, s_tilde_scale(ss))};
}

RealMatrix feedthrough_noise_matrix(const StateSpace& ss) {
  return theta(ss.n) * ss.c.transpose() * diag_j(ss.n_y);
}

RealMatrix additional_noise_matrix(const ComplexMatrix& lambda_b1, const Tolerances& tol) {
  if (lambda_b1.rows() == 0) return RealMatrix(lambda_b1.cols(), 0);
  return real_part(noise_matrix(lambda_b1), tol, "Bv2");
}

RealizationWitness make_witness(const StateSpace& ss, const ComplexMatrix& lambda_b1) {
  validate(ss);
  if (lambda_b1.cols() != ss.n) fail(ErrorCode::DimensionMismatch, "Lambda_b1 must have n columns");
  const RealMatrix th = theta(ss.n);

  RealizationWitness w;
  w.r = -0.25 * (th * ss.a + ss.a.transpose() * th.transpose());

  const Index half_y = ss.n_y / 2;
  ComplexMatrix sel_y(half_y, ss.n_y);
  sel_y << ComplexMatrix::Identity(half_y, half_y), kI * ComplexMatrix::Identity(half_y, half_y);
  w.lambda_b0 = 0.5 * sel_y * perm(ss.n_y).cast<Complex>() * ss.c.cast<Complex>();

  w.lambda_b1 = lambda_b1;

  const Index half_u = ss.n_u / 2;
  ComplexMatrix sel_u = ComplexMatrix::Zero(half_u, ss.n_u);
  sel_u.leftCols(half_u).setIdentity();
  w.lambda_b2 = -kI * sel_u * gamma(ss.n_u) * (ss.bu.transpose() * th).cast<Complex>();
  return w;
}

MinimalRealization realize_minimal(const StateSpace& ss, const Tolerances& tol, RankPolicy policy) {
  const RealMatrix s = s_tilde(ss);
  const SkewSpectrum spec = analyze_skew(s, tol, s_tilde_scale(ss));
  double threshold = spec.threshold;
  if (spec.ambiguous) {
    if (policy == RankPolicy::Strict) {
      fail(ErrorCode::NumericalRankAmbiguity,
           "eigenvalues of S-tilde lie within a factor of 10 of the rank threshold");
    }
    threshold *= 0.1;
  }

  // Λ_b1 = (|D| + D)^{1/2} U, keeping only rows with a nonzero diagonal entry.
  std::vector<Index> kept;
  for (Index i = 0; i < spec.eig.values.size(); ++i) {
    if (spec.eig.values(i) > threshold) kept.push_back(i);
  }
  ComplexMatrix lambda_b1(static_cast<Index>(kept.size()), ss.n);
  for (Index r = 0; r < lambda_b1.rows(); ++r) {
    const Index i = kept[static_cast<std::size_t>(r)];
    lambda_b1.row(r) = std::sqrt(2.0 * spec.eig.values(i)) * spec.eig.u.row(i);
  }

  MinimalRealization out;
  out.realization.ss = ss;
  out.realization.bv1 = feedthrough_noise_matrix(ss);
  out.realization.bv2 = additional_noise_matrix(lambda_b1, tol);
  out.witness = make_witness(ss, lambda_b1);
  return out;
}

RealizabilityReport check_realizable(const QuantumRealization& qr, const Tolerances& tol) {
  tol.validate();
  const StateSpace& ss = qr.ss;
  validate(ss);
  if (qr.bv1.rows() != ss.n || qr.bv1.cols() != ss.n_u) {
    fail(ErrorCode::DimensionMismatch, "Bv1 must be n x n_u");
  }
  if (qr.bv2.rows() != ss.n) fail(ErrorCode::DimensionMismatch, "Bv2 must have n rows");
  if (qr.bv2.cols() % 2 != 0) fail(ErrorCode::OddDimension, "Bv2 must have an even number of columns");

  const RealMatrix th = theta(ss.n);
  RealMatrix dyn = ss.a * th + th * ss.a.transpose() +
                   qr.bv1 * diag_j(qr.n_v1()) * qr.bv1.transpose() +
                   ss.bu * diag_j(ss.n_u) * ss.bu.transpose();
  if (qr.n_v2() > 0) dyn += qr.bv2 * diag_j(qr.n_v2()) * qr.bv2.transpose();

  RealizabilityReport report;
  report.residual_dynamics = dyn.norm();
  report.residual_feedthrough = (qr.bv1 - feedthrough_noise_matrix(ss)).norm();
  const double dyn_scale =
      std::max(1.0, 2.0 * ss.a.norm() + qr.bv1.squaredNorm() + qr.bv2.squaredNorm() + ss.bu.squaredNorm());
  const double feed_scale = std::max(1.0, ss.c.norm());
  report.realizable = report.residual_dynamics <= tol.residual_abs * dyn_scale &&
                      report.residual_feedthrough <= tol.residual_abs * feed_scale;
  return report;
}

QuantumRealization reconstruct(const RealizationWitness& w, const RealizationDims& dims,
                               const Tolerances& tol) {
  tol.validate();
  for (Index d : {dims.n, dims.n_u, dims.n_y, dims.n_v2}) {
    if (d < 0 || d % 2 != 0) fail(ErrorCode::OddDimension, "reconstruct: dimensions must be even");
  }
  const Index n = dims.n;
  if (w.r.rows() != n || w.r.cols() != n || w.lambda_b0.rows() != dims.n_y / 2 ||
      w.lambda_b1.rows() != dims.n_v2 / 2 || w.lambda_b2.rows() != dims.n_u / 2 ||
      w.lambda_b0.cols() != n || w.lambda_b1.cols() != n || w.lambda_b2.cols() != n) {
    fail(ErrorCode::DimensionMismatch, "reconstruct: witness does not match dimensions");
  }

  const ComplexMatrix lambda = w.lambda();
  const Index n_w = 2 * lambda.rows();
  const RealMatrix th = theta(n);

  QuantumRealization qr;
  qr.ss.n = n;
  qr.ss.n_u = dims.n_u;
  qr.ss.n_y = dims.n_y;
  qr.ss.a = 2.0 * th * (w.r + (lambda.adjoint() * lambda).imag());

  const RealMatrix b = real_part(noise_matrix(lambda), tol, "[Bv1, Bv2, Bu]");
  qr.bv1 = b.leftCols(dims.n_y);
  qr.bv2 = b.middleCols(dims.n_y, dims.n_v2);
  qr.ss.bu = b.rightCols(dims.n_u);

  // C = Pᵀ diag(Σ, Σ) [Λ + Λ#; −iΛ + iΛ#], Σ selecting the Λ_b0 rows.
  const Index half_y = dims.n_y / 2;
  ComplexMatrix sigma2 = ComplexMatrix::Zero(dims.n_y, n_w);
  sigma2.block(0, 0, half_y, half_y).setIdentity();
  sigma2.block(half_y, n_w / 2, half_y, half_y).setIdentity();
  ComplexMatrix parts(n_w, n);
  parts << lambda + lambda.conjugate(), -kI * lambda + kI * lambda.conjugate();
  qr.ss.c = real_part(perm(dims.n_y).transpose().cast<Complex>() * sigma2 * parts, tol, "C");
  return qr;
}

}  // namespace qrealize
