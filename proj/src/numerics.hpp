#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qrealize {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Numerical thresholds shared by every solver. All norms are Frobenius.
struct Tolerances {
  double rank_rel = 1e-9;       // relative eigen/singular value cut-off
  double residual_abs = 1e-8;   // residual bound for solver outputs
  double imag_axis_rel = 1e-8;  // |Re λ| below this · ‖M‖ counts as on the axis

  void validate() const;
};

struct HermitianEig {
  Eigen::VectorXd values;  // |value| descending, + before - within a ± pair
  ComplexMatrix u;         // unitary, m = u† diag(values) u
};

/// Unitary eigendecomposition m = u†·diag(values)·u of a Hermitian matrix.
/// Eigenvectors (rows of u, conjugated) are phase-normalized so their first
/// non-negligible component is real positive.
HermitianEig hermitian_eig(const ComplexMatrix& m, const Tolerances& tol = {});

/// Spectral summary of a real skew-symmetric matrix s, computed from the
/// Hermitian matrix (i/4)s whose eigenvalues come in ± pairs.
struct SkewSpectrum {
  HermitianEig eig;   // of (i/4)s
  double threshold;   // eigenvalues of (i/4)s above this are counted
  int rank;           // always even
  bool ambiguous;     // some |eigenvalue| within a factor 10 of threshold
};

/// `reference_scale` is an a-priori magnitude for ‖s‖ (0 = purely relative).
/// It keeps roundoff-only matrices from being reported as full rank.
SkewSpectrum analyze_skew(const RealMatrix& s, const Tolerances& tol,
                          double reference_scale = 0.0);

/// Rank of a real skew-symmetric matrix; even by construction.
int rank_skew(const RealMatrix& s, const Tolerances& tol = {},
              double reference_scale = 0.0);

/// Solves a·Q + Q·aᵀ + w = 0 for Hurwitz a (complex Schur, Bartels–Stewart).
RealMatrix solve_lyapunov(const RealMatrix& a, const RealMatrix& w,
                          const Tolerances& tol = {});

/// Stabilizing solution of aᵀP + Pa − P b r⁻¹ bᵀ P + q = 0.
RealMatrix solve_care(const RealMatrix& a, const RealMatrix& b, const RealMatrix& q,
                      const RealMatrix& r, const Tolerances& tol = {});

/// L with exactly k rows such that L†L = m, for Hermitian PSD m of rank k.
ComplexMatrix psd_factor(const ComplexMatrix& m, Index k, const Tolerances& tol = {});

/// Orthonormal basis (2n×n) of the stable invariant subspace of a 2n×2n
/// matrix with no eigenvalues near the imaginary axis. Throws
/// ImaginaryAxisEigenvalue otherwise.
ComplexMatrix stable_invariant_subspace(const RealMatrix& h, const Tolerances& tol);

Eigen::VectorXcd eigenvalues(const RealMatrix& a);
bool is_hurwitz(const RealMatrix& a, const Tolerances& tol = {});

RealMatrix symmetrize(const RealMatrix& m);
RealMatrix antisymmetrize(const RealMatrix& m);

/// Block-diagonal concatenation; empty blocks are allowed.
RealMatrix block_diag(std::initializer_list<RealMatrix> blocks);

}  // namespace qrealize
