#include "numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "error.hpp"

namespace qrealize {

namespace {

// Relative gap under which two eigenvalue magnitudes are treated as one ± pair
// when fixing the canonical ordering.
constexpr double kPairGap = 1e-10;
// Components below this magnitude (unit eigenvector) are skipped when
// choosing the phase reference.
constexpr double kPhaseFloor = 1e-8;

void require_square(const RealMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    fail(ErrorCode::DimensionMismatch, std::string(what) + " must be square");
  }
}

// Swaps the adjacent diagonal entries k, k+1 of an upper triangular Schur
// factor t with a unitary rotation, accumulating it into u.
void swap_schur_entries(ComplexMatrix& t, ComplexMatrix& u, Index k) {
  const Complex a = t(k, k);
  const Complex d = t(k + 1, k + 1);
  Eigen::Vector2cd v(t(k, k + 1), d - a);
  const double len = v.norm();
  if (len == 0.0) return;
  v /= len;
  Eigen::Matrix2cd z;
  z.col(0) = v;
  z.col(1) << -std::conj(v(1)), std::conj(v(0));
  t.middleRows(k, 2) = (z.adjoint() * t.middleRows(k, 2)).eval();
  t.middleCols(k, 2) = (t.middleCols(k, 2) * z).eval();
  u.middleCols(k, 2) = (u.middleCols(k, 2) * z).eval();
  t(k + 1, k) = 0.0;
}

}  // namespace

void Tolerances::validate() const {
  for (double v : {rank_rel, residual_abs, imag_axis_rel}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(ErrorCode::InvalidParameter, "tolerances must be finite and strictly positive");
    }
  }
}

HermitianEig hermitian_eig(const ComplexMatrix& m, const Tolerances& tol) {
  tol.validate();
  if (m.rows() != m.cols()) fail(ErrorCode::DimensionMismatch, "hermitian_eig: matrix must be square");
  const Index n = m.rows();
  if (n == 0) return {Eigen::VectorXd(0), ComplexMatrix(0, 0)};
  if (!m.allFinite()) fail(ErrorCode::InvalidArgument, "hermitian_eig: non-finite entries");
  if ((m - m.adjoint()).norm() > tol.residual_abs * m.norm()) {
    fail(ErrorCode::NotHermitian, "hermitian_eig: matrix is not Hermitian");
  }

  const ComplexMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm);
  const Eigen::VectorXd& raw = solver.eigenvalues();
  const ComplexMatrix& vecs = solver.eigenvectors();

  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index i, Index j) {
    const double ai = std::abs(raw(i));
    const double aj = std::abs(raw(j));
    if (ai != aj) return ai > aj;
    return raw(i) > raw(j);
  });

  // Interleave +/- members of clusters of equal magnitude: λ, -λ, λ', -λ', ...
  const double gap = kPairGap * std::abs(raw(idx.front()));
  std::vector<Index> order;
  order.reserve(idx.size());
  for (std::size_t i = 0; i < idx.size();) {
    const double lead = std::abs(raw(idx[i]));
    std::size_t j = i;
    std::vector<Index> pos, neg;
    while (j < idx.size() && lead - std::abs(raw(idx[j])) <= gap) {
      (raw(idx[j]) >= 0.0 ? pos : neg).push_back(idx[j]);
      ++j;
    }
    for (std::size_t p = 0; p < std::max(pos.size(), neg.size()); ++p) {
      if (p < pos.size()) order.push_back(pos[p]);
      if (p < neg.size()) order.push_back(neg[p]);
    }
    i = j;
  }

  HermitianEig out{Eigen::VectorXd(n), ComplexMatrix(n, n)};
  for (Index r = 0; r < n; ++r) {
    const Index src = order[static_cast<std::size_t>(r)];
    Eigen::VectorXcd v = vecs.col(src);
    for (Index k = 0; k < n; ++k) {
      const double mag = std::abs(v(k));
      if (mag > kPhaseFloor) {
        v *= std::conj(v(k)) / mag;
        v(k) = mag;
        break;
      }
    }
    out.values(r) = raw(src);
    out.u.row(r) = v.adjoint();
  }
  return out;
}

SkewSpectrum analyze_skew(const RealMatrix& s, const Tolerances& tol, double reference_scale) {
  tol.validate();
  require_square(s, "skew matrix");
  if (!s.allFinite()) fail(ErrorCode::InvalidArgument, "skew matrix has non-finite entries");
  if ((s + s.transpose()).norm() > tol.residual_abs * s.norm()) {
    fail(ErrorCode::NotSkewSymmetric, "matrix is not skew-symmetric");
  }
  const RealMatrix skew = antisymmetrize(s);
  const ComplexMatrix herm = Complex(0.0, 0.25) * skew.cast<Complex>();

  SkewSpectrum out{hermitian_eig(herm, tol), 0.0, 0, false};
  const Eigen::VectorXd& values = out.eig.values;
  const double largest = values.size() > 0 ? std::abs(values(0)) : 0.0;
  out.threshold = tol.rank_rel * std::max(largest, 0.25 * reference_scale);

  int positive = 0;
  for (Index i = 0; i < values.size(); ++i) {
    const double v = values(i);
    if (v > out.threshold) ++positive;
    const double mag = std::abs(v);
    if (out.threshold > 0.0 && mag > 0.1 * out.threshold && mag <= 10.0 * out.threshold) {
      out.ambiguous = true;
    }
  }
  out.rank = 2 * positive;
  return out;
}

int rank_skew(const RealMatrix& s, const Tolerances& tol, double reference_scale) {
  return analyze_skew(s, tol, reference_scale).rank;
}

Eigen::VectorXcd eigenvalues(const RealMatrix& a) {
  require_square(a, "eigenvalues: matrix");
  if (a.rows() == 0) return Eigen::VectorXcd(0);
  Eigen::ComplexSchur<ComplexMatrix> schur(a.cast<Complex>(), /*computeU=*/false);
  return schur.matrixT().diagonal();
}

bool is_hurwitz(const RealMatrix& a, const Tolerances& tol) {
  const Eigen::VectorXcd ev = eigenvalues(a);
  const double bound = -tol.imag_axis_rel * a.norm();
  for (Index i = 0; i < ev.size(); ++i) {
    if (!(ev(i).real() < bound)) return false;
  }
  return true;
}

RealMatrix solve_lyapunov(const RealMatrix& a, const RealMatrix& w, const Tolerances& tol) {
  tol.validate();
  require_square(a, "solve_lyapunov: a");
  const Index n = a.rows();
  if (w.rows() != n || w.cols() != n) fail(ErrorCode::DimensionMismatch, "solve_lyapunov: w must match a");
  if (n == 0) return RealMatrix(0, 0);
  if (!a.allFinite() || !w.allFinite()) fail(ErrorCode::InvalidArgument, "solve_lyapunov: non-finite input");

  Eigen::ComplexSchur<ComplexMatrix> schur(a.cast<Complex>());
  const ComplexMatrix& t = schur.matrixT();
  const ComplexMatrix& u = schur.matrixU();
  const double bound = -tol.imag_axis_rel * a.norm();
  for (Index i = 0; i < n; ++i) {
    if (!(t(i, i).real() < bound)) fail(ErrorCode::NotHurwitz, "solve_lyapunov: a is not Hurwitz");
  }

  // With a = U T U†, solve T Y + Y T† = -U† w U one column at a time, last first.
  const ComplexMatrix c = u.adjoint() * w.cast<Complex>() * u;
  ComplexMatrix y = ComplexMatrix::Zero(n, n);
  for (Index j = n - 1; j >= 0; --j) {
    Eigen::VectorXcd rhs = -c.col(j);
    for (Index k = j + 1; k < n; ++k) rhs -= std::conj(t(j, k)) * y.col(k);
    ComplexMatrix shifted = t;
    shifted.diagonal().array() += std::conj(t(j, j));
    y.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return symmetrize((u * y * u.adjoint()).real());
}

ComplexMatrix stable_invariant_subspace(const RealMatrix& h, const Tolerances& tol) {
  tol.validate();
  require_square(h, "stable_invariant_subspace: h");
  const Index dim = h.rows();
  if (dim % 2 != 0) fail(ErrorCode::DimensionMismatch, "stable_invariant_subspace: odd dimension");
  const Index half = dim / 2;
  if (dim == 0) return ComplexMatrix(0, 0);
  if (!h.allFinite()) fail(ErrorCode::InvalidArgument, "stable_invariant_subspace: non-finite input");

  Eigen::ComplexSchur<ComplexMatrix> schur(h.cast<Complex>());
  ComplexMatrix t = schur.matrixT();
  ComplexMatrix u = schur.matrixU();

  const double axis = tol.imag_axis_rel * h.norm();
  Index stable = 0;
  for (Index i = 0; i < dim; ++i) {
    const double re = t(i, i).real();
    if (std::abs(re) <= axis) {
      fail(ErrorCode::ImaginaryAxisEigenvalue, "eigenvalue on (or near) the imaginary axis");
    }
    if (re < 0.0) ++stable;
  }
  if (stable != half) {
    fail(ErrorCode::ImaginaryAxisEigenvalue, "stable subspace does not have half dimension");
  }

  for (bool swapped = true; swapped;) {
    swapped = false;
    for (Index k = 0; k + 1 < dim; ++k) {
      if (t(k, k).real() > 0.0 && t(k + 1, k + 1).real() < 0.0) {
        swap_schur_entries(t, u, k);
        swapped = true;
      }
    }
  }
  return u.leftCols(half);
}

RealMatrix solve_care(const RealMatrix& a, const RealMatrix& b, const RealMatrix& q,
                      const RealMatrix& r, const Tolerances& tol) {
  tol.validate();
  require_square(a, "solve_care: a");
  const Index n = a.rows();
  const Index m = b.cols();
  if (b.rows() != n || q.rows() != n || q.cols() != n || r.rows() != m || r.cols() != m) {
    fail(ErrorCode::DimensionMismatch, "solve_care: inconsistent dimensions");
  }
  if (n == 0) return RealMatrix(0, 0);
  if ((r - r.transpose()).norm() > tol.residual_abs * r.norm()) {
    fail(ErrorCode::InvalidArgument, "solve_care: r must be symmetric");
  }
  Eigen::LLT<RealMatrix> r_llt(symmetrize(r));
  if (r_llt.info() != Eigen::Success) {
    fail(ErrorCode::InvalidArgument, "solve_care: r must be positive definite");
  }
  const RealMatrix g = b * r_llt.solve(b.transpose());

  RealMatrix h(2 * n, 2 * n);
  h << a, -g, -symmetrize(q), -a.transpose();

  ComplexMatrix basis;
  try {
    basis = stable_invariant_subspace(h, tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ImaginaryAxisEigenvalue) throw;
    fail(ErrorCode::NoStabilizingSolution, std::string("solve_care: ") + e.what());
  }
  const ComplexMatrix x1 = basis.topRows(n);
  const ComplexMatrix x2 = basis.bottomRows(n);
  Eigen::JacobiSVD<ComplexMatrix> svd(x1);
  const auto& sv = svd.singularValues();
  if (!(sv(n - 1) > tol.rank_rel * sv(0))) {
    fail(ErrorCode::NoStabilizingSolution, "solve_care: stable subspace basis is singular");
  }
  const ComplexMatrix pc = x1.transpose().partialPivLu().solve(x2.transpose()).transpose();
  const double scale = std::max(1.0, pc.norm());
  if (pc.imag().norm() > tol.residual_abs * scale) {
    fail(ErrorCode::NoStabilizingSolution, "solve_care: solution is not real");
  }
  RealMatrix p = symmetrize(pc.real());

  Eigen::SelfAdjointEigenSolver<RealMatrix> psd(p, Eigen::EigenvaluesOnly);
  if (psd.eigenvalues().minCoeff() < -tol.residual_abs * scale) {
    fail(ErrorCode::NoStabilizingSolution, "solve_care: solution is not positive semidefinite");
  }
  if (!is_hurwitz(a - g * p, tol)) {
    fail(ErrorCode::NoStabilizingSolution, "solve_care: closed loop is not stable");
  }
  return p;
}

ComplexMatrix psd_factor(const ComplexMatrix& m, Index k, const Tolerances& tol) {
  const HermitianEig eig = hermitian_eig(m, tol);
  const Index n = m.rows();
  if (k < 0 || k > n) fail(ErrorCode::RankMismatch, "psd_factor: requested rank out of range");
  if (n == 0) return ComplexMatrix(0, 0);
  if (eig.values.minCoeff() < -tol.residual_abs * m.norm()) {
    fail(ErrorCode::NotPSD, "psd_factor: matrix is not positive semidefinite");
  }
  const double threshold = tol.rank_rel * std::abs(eig.values(0));
  std::vector<Index> kept;
  for (Index i = 0; i < n; ++i) {
    if (eig.values(i) > threshold) kept.push_back(i);
  }
  if (static_cast<Index>(kept.size()) != k) {
    fail(ErrorCode::RankMismatch, "psd_factor: numerical rank " + std::to_string(kept.size()) +
                                      " differs from requested " + std::to_string(k));
  }
  ComplexMatrix l(k, n);
  for (Index r = 0; r < k; ++r) {
    const Index i = kept[static_cast<std::size_t>(r)];
    l.row(r) = std::sqrt(eig.values(i)) * eig.u.row(i);
  }
  return l;
}

RealMatrix symmetrize(const RealMatrix& m) { return 0.5 * (m + m.transpose()); }

RealMatrix antisymmetrize(const RealMatrix& m) { return 0.5 * (m - m.transpose()); }

RealMatrix block_diag(std::initializer_list<RealMatrix> blocks) {
  Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  RealMatrix out = RealMatrix::Zero(rows, cols);
  Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

}  // namespace qrealize
