#include "qlti_model.hpp"

#include <string>

#include "error.hpp"

namespace qrealize {

namespace {

void require_even(Index n, const char* what) {
  if (n < 0 || n % 2 != 0) {
    fail(ErrorCode::OddDimension, std::string(what) + ": dimension " + std::to_string(n) +
                                      " is not even");
  }
}

ComplexMatrix m_block() {
  ComplexMatrix m(2, 2);
  m << Complex(0.5, 0.0), Complex(0.0, 0.5), Complex(0.5, 0.0), Complex(0.0, -0.5);
  return m;
}

}  // namespace

StateSpace StateSpace::from_matrices(RealMatrix a, RealMatrix bu, RealMatrix c) {
  StateSpace ss;
  ss.n = a.rows();
  ss.n_u = bu.cols();
  ss.n_y = c.rows();
  ss.a = std::move(a);
  ss.bu = std::move(bu);
  ss.c = std::move(c);
  return ss;
}

ComplexMatrix RealizationWitness::lambda() const {
  const Index cols = lambda_b0.cols();
  ComplexMatrix out(lambda_b0.rows() + lambda_b1.rows() + lambda_b2.rows(), cols);
  out << lambda_b0, lambda_b1, lambda_b2;
  return out;
}

RealMatrix theta(Index n) {
  require_even(n, "theta");
  RealMatrix t = RealMatrix::Zero(n, n);
  for (Index k = 0; k < n; k += 2) {
    t(k, k + 1) = 1.0;
    t(k + 1, k) = -1.0;
  }
  return t;
}

RealMatrix perm(Index n) {
  require_even(n, "perm");
  const Index half = n / 2;
  RealMatrix p = RealMatrix::Zero(n, n);
  for (Index i = 0; i < half; ++i) {
    p(i, 2 * i) = 1.0;
    p(half + i, 2 * i + 1) = 1.0;
  }
  return p;
}

ComplexMatrix gamma(Index n) {
  require_even(n, "gamma");
  ComplexMatrix diag_m = ComplexMatrix::Zero(n, n);
  const ComplexMatrix m = m_block();
  for (Index k = 0; k < n; k += 2) diag_m.block(k, k, 2, 2) = m;
  return perm(n).cast<Complex>() * diag_m;
}

RealMatrix diag_j(Index n) { return theta(n); }

ItoTriple vacuum_ito(Index n) {
  require_even(n, "vacuum_ito");
  ItoTriple ito;
  ito.s = RealMatrix::Identity(n, n);
  ito.t = Complex(0.0, 1.0) * diag_j(n).cast<Complex>();
  ito.f = ito.s.cast<Complex>() + ito.t;
  return ito;
}

void validate(const StateSpace& ss) {
  if (ss.n <= 0 || ss.n_u <= 0 || ss.n_y <= 0) {
    fail(ErrorCode::InvalidArgument, "state space dimensions must be positive");
  }
  require_even(ss.n, "state dimension n");
  require_even(ss.n_u, "input dimension n_u");
  require_even(ss.n_y, "output dimension n_y");
  if (ss.a.rows() != ss.n || ss.a.cols() != ss.n) fail(ErrorCode::DimensionMismatch, "A must be n x n");
  if (ss.bu.rows() != ss.n || ss.bu.cols() != ss.n_u) fail(ErrorCode::DimensionMismatch, "Bu must be n x n_u");
  if (ss.c.rows() != ss.n_y || ss.c.cols() != ss.n) fail(ErrorCode::DimensionMismatch, "C must be n_y x n");
  if (ss.n_y != ss.n_u) fail(ErrorCode::NonSquareInputOutput, "n_y must equal n_u");
  if (!ss.a.allFinite() || !ss.bu.allFinite() || !ss.c.allFinite()) {
    fail(ErrorCode::InvalidArgument, "state space matrices must be finite");
  }
}

}  // namespace qrealize
