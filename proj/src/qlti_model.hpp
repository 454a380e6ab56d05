#pragma once

#include "numerics.hpp"

namespace qrealize {

/// Strictly proper LTI system dx = A x dt + Bu du, dy = C x dt.
struct StateSpace {
  Index n = 0;
  Index n_u = 0;
  Index n_y = 0;
  RealMatrix a;
  RealMatrix bu;
  RealMatrix c;

  /// Dimensions taken from the matrices (n = rows of a, etc.).
  static StateSpace from_matrices(RealMatrix a, RealMatrix bu, RealMatrix c);
};

/// State space plus introduced vacuum noises: dv1 (direct feedthrough,
/// n_v1 = n_u) and dv2 (additional, n_v2 even, possibly zero columns).
struct QuantumRealization {
  StateSpace ss;
  RealMatrix bv1;
  RealMatrix bv2;

  Index n_v1() const { return bv1.cols(); }
  Index n_v2() const { return bv2.cols(); }
};

/// Ito matrix F = S + T of a quantum Wiener process.
struct ItoTriple {
  ComplexMatrix f;
  RealMatrix s;
  ComplexMatrix t;
};

/// Hamiltonian ½xᵀRx and coupling Λx, with Λ = [Λ_b0; Λ_b1; Λ_b2].
struct RealizationWitness {
  RealMatrix r;
  ComplexMatrix lambda_b0;  // n_y/2 rows
  ComplexMatrix lambda_b1;  // n_v2/2 rows
  ComplexMatrix lambda_b2;  // n_u/2 rows

  ComplexMatrix lambda() const;
};

/// Commutation matrix: block-diag of n/2 copies of J = [[0,1],[-1,0]].
RealMatrix theta(Index n);

/// Permutation P with P·(a1, a2, ..., a2m) = (a1, a3, ..., a2m-1, a2, a4, ..., a2m).
RealMatrix perm(Index n);

/// Γ = perm(n)·diag(M), M = ½[[1, i], [1, -i]].
ComplexMatrix gamma(Index n);

/// diag(J) as it appears next to C in the realizability conditions.
RealMatrix diag_j(Index n);

/// Vacuum noise Ito matrices: F block-diag [[1, i], [-i, 1]].
ItoTriple vacuum_ito(Index n);

void validate(const StateSpace& ss);

}  // namespace qrealize
