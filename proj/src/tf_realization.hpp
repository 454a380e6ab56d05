#pragma once

#include "realizability.hpp"

namespace qrealize {

/// H = [[Ã, R̃], [−Q̃, −Ãᵀ]] with R̃ = −B̃Θ_uB̃ᵀ and Q̃ = C̃ᵀΘ_yC̃ (both skew).
struct HamiltonianMatrix {
  RealMatrix h;
  RealMatrix r_tilde;
  RealMatrix q_tilde;

  Index n() const { return h.rows() / 2; }
};

struct RicSolution {
  RealMatrix x;               // skew-symmetric solution X = X₂X₁⁻¹
  double x1_condition = 0.0;  // 2-norm condition number of X₁
};

/// Nonsingular skew solution X of the skew ARE with its factor X = TᵀΘT.
struct SkewSolution {
  RealMatrix x;
  RealMatrix t;
  double x1_condition = 0.0;
};

struct TfRealization {
  QuantumRealization realization;  // n_v2 = 0
  SkewSolution solution;
  RealizationWitness witness;
};

HamiltonianMatrix build_h(const StateSpace& ss);

/// Stable-subspace solution of X B̃Θ_uB̃ᵀ X − ÃᵀX − XÃ − C̃ᵀΘ_yC̃ = 0.
RicSolution ric(const HamiltonianMatrix& h, const Tolerances& tol = {});

/// Residual of the skew ARE for a candidate X.
RealMatrix skew_are_residual(const StateSpace& ss, const RealMatrix& x);

/// Real nonsingular T with TᵀΘT = x for skew-symmetric nonsingular x.
RealMatrix skew_factor(const RealMatrix& x, const Tolerances& tol = {});

/// Realizes the transfer function of ss with only direct-feedthrough noises.
/// Failures are reported as NotRealizableWithoutExtraNoise with the cause
/// (ImaginaryAxisEigenvalue, SingularX1, SingularX or NonRealResidue).
TfRealization realize_tf(const StateSpace& ss, const Tolerances& tol = {});

/// G(s) = C (sI − A)⁻¹ Bu.
ComplexMatrix tf_eval(const StateSpace& ss, Complex s);

}  // namespace qrealize
