#include "tf_realization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "error.hpp"

namespace qrealize {

namespace {

bool is_tf_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::ImaginaryAxisEigenvalue:
    case ErrorCode::SingularX1:
    case ErrorCode::SingularX:
    case ErrorCode::NonRealResidue:
    case ErrorCode::NotSkewSymmetric:
      return true;
    default:
      return false;
  }
}

}  // namespace

HamiltonianMatrix build_h(const StateSpace& ss) {
  validate(ss);
  HamiltonianMatrix out;
  out.r_tilde = -ss.bu * theta(ss.n_u) * ss.bu.transpose();
  out.q_tilde = ss.c.transpose() * theta(ss.n_y) * ss.c;
  out.h.resize(2 * ss.n, 2 * ss.n);
  out.h << ss.a, out.r_tilde, -out.q_tilde, -ss.a.transpose();
  return out;
}

RicSolution ric(const HamiltonianMatrix& h, const Tolerances& tol) {
  const Index n = h.n();
  const ComplexMatrix basis = stable_invariant_subspace(h.h, tol);
  const ComplexMatrix x1 = basis.topRows(n);
  const ComplexMatrix x2 = basis.bottomRows(n);

  Eigen::JacobiSVD<ComplexMatrix> svd(x1);
  const Eigen::VectorXd& sv = svd.singularValues();
  RicSolution out;
  out.x1_condition = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : std::numeric_limits<double>::infinity();
  if (!(out.x1_condition < 1.0 / tol.rank_rel)) {
    fail(ErrorCode::SingularX1, "X1 is singular (condition " + std::to_string(out.x1_condition) + ")");
  }

  const ComplexMatrix xc = x1.transpose().partialPivLu().solve(x2.transpose()).transpose();
  const double scale = std::max(1.0, xc.norm());
  if (xc.imag().norm() > tol.residual_abs * scale) {
    fail(ErrorCode::NonRealResidue, "Riccati solution has a non-negligible imaginary part");
  }
  const RealMatrix x = xc.real();
  if ((x + x.transpose()).norm() > tol.residual_abs * scale) {
    fail(ErrorCode::NotSkewSymmetric, "Riccati solution is not skew-symmetric");
  }
  out.x = antisymmetrize(x);
  return out;
}

RealMatrix skew_are_residual(const StateSpace& ss, const RealMatrix& x) {
  return x * ss.bu * theta(ss.n_u) * ss.bu.transpose() * x - ss.a.transpose() * x - x * ss.a -
         ss.c.transpose() * theta(ss.n_y) * ss.c;
}

RealMatrix skew_factor(const RealMatrix& x, const Tolerances& tol) {
  tol.validate();
  if (x.rows() != x.cols()) fail(ErrorCode::DimensionMismatch, "skew_factor: x must be square");
  const Index n = x.rows();
  if ((x + x.transpose()).norm() > tol.residual_abs * x.norm()) {
    fail(ErrorCode::NotSkewSymmetric, "skew_factor: x is not skew-symmetric");
  }
  if (n == 0 || n % 2 != 0) fail(ErrorCode::SingularX, "skew_factor: odd or empty skew matrix is singular");

  // X v = iμ v  <=>  (−iX) v = μ v, with −iX Hermitian.
  const ComplexMatrix k = Complex(0.0, -1.0) * antisymmetrize(x).cast<Complex>();
  const HermitianEig eig = hermitian_eig(k, tol);
  const double largest = std::abs(eig.values(0));
  if (!(std::abs(eig.values(n - 1)) > tol.rank_rel * largest)) {
    fail(ErrorCode::SingularX, "skew_factor: x is singular");
  }

  // V = [v1, v̄1, v2, v̄2, ...] with each partner the exact conjugate.
  ComplexMatrix v(n, n);
  Eigen::VectorXd d(n);
  Index col = 0;
  for (Index i = 0; i < n && col < n; ++i) {
    const double mu = eig.values(i);
    if (mu <= 0.0) continue;
    Eigen::VectorXcd vec = eig.u.row(i).adjoint();
    Index big = 0;
    vec.cwiseAbs().maxCoeff(&big);
    vec *= std::polar(1.0, -std::arg(vec(big)));
    v.col(col) = vec;
    v.col(col + 1) = vec.conjugate();
    d(col) = d(col + 1) = std::sqrt(mu);
    col += 2;
  }
  if (col != n) fail(ErrorCode::SingularX, "skew_factor: eigenvalues are not in conjugate pairs");

  ComplexMatrix v_tilde = ComplexMatrix::Zero(n, n);
  const double s = 1.0 / std::sqrt(2.0);
  for (Index b = 0; b < n; b += 2) {
    v_tilde(b, b) = s;
    v_tilde(b, b + 1) = s;
    v_tilde(b + 1, b) = Complex(0.0, s);
    v_tilde(b + 1, b + 1) = Complex(0.0, -s);
  }
  const ComplexMatrix t = v_tilde * d.cast<Complex>().asDiagonal() * v.adjoint();
  if (t.imag().norm() > tol.residual_abs * std::max(1.0, t.real().norm())) {
    fail(ErrorCode::NonRealResidue, "skew_factor: T has a non-negligible imaginary part");
  }
  return t.real();
}

TfRealization realize_tf(const StateSpace& ss, const Tolerances& tol) {
  validate(ss);
  TfRealization out;
  try {
    if (noise_requirement(ss, tol).n_v2 == 0) {
      // Already balanced: X = Θ solves the ARE and T = I factors it.
      out.solution.x = theta(ss.n);
      out.solution.t = RealMatrix::Identity(ss.n, ss.n);
      out.solution.x1_condition = 1.0;
    } else {
      const RicSolution sol = ric(build_h(ss), tol);
      out.solution.x = sol.x;
      out.solution.x1_condition = sol.x1_condition;
      out.solution.t = skew_factor(sol.x, tol);
    }
  } catch (const Error& e) {
    if (!is_tf_failure(e.code())) throw;
    throw Error(ErrorCode::NotRealizableWithoutExtraNoise, e.code(),
                std::string("transfer function not realizable without additional noise: ") + e.what());
  }

  const RealMatrix& t = out.solution.t;
  const Eigen::PartialPivLU<RealMatrix> t_lu(t);
  const RealMatrix t_inv = t_lu.inverse();
  StateSpace realized = ss;
  realized.a = t * ss.a * t_inv;
  realized.bu = t * ss.bu;
  realized.c = ss.c * t_inv;

  out.realization.ss = realized;
  out.realization.bv1 = feedthrough_noise_matrix(realized);
  out.realization.bv2 = RealMatrix(ss.n, 0);
  out.witness = make_witness(realized, ComplexMatrix(0, ss.n));

  if (!check_realizable(out.realization, tol).realizable) {
    throw Error(ErrorCode::NotRealizableWithoutExtraNoise, ErrorCode::SingularX,
                "transformed system fails the realizability check (T is ill-conditioned)");
  }
  return out;
}

ComplexMatrix tf_eval(const StateSpace& ss, Complex s) {
  validate(ss);
  const ComplexMatrix resolvent =
      s * ComplexMatrix::Identity(ss.n, ss.n) - ss.a.cast<Complex>();
  const Eigen::PartialPivLU<ComplexMatrix> lu(resolvent);
  if (!(lu.rcond() > 1e3 * std::numeric_limits<double>::epsilon())) {
    fail(ErrorCode::SingularResolvent, "tf_eval: s is (numerically) an eigenvalue of A");
  }
  return ss.c.cast<Complex>() * lu.solve(ss.bu.cast<Complex>());
}

}  // namespace qrealize
