#pragma once

#include "qlti_model.hpp"

namespace qrealize {

struct RealizabilityReport {
  bool realizable = false;
  double residual_dynamics = 0.0;     // ‖AΘ + ΘAᵀ + Σ B diag(J) Bᵀ‖
  double residual_feedthrough = 0.0;  // ‖Bv1 − ΘCᵀdiag(J)‖
};

struct NoiseCount {
  Index n_v1 = 0;
  Index n_v2 = 0;
};

struct MinimalRealization {
  QuantumRealization realization;
  RealizationWitness witness;
};

struct RealizationDims {
  Index n = 0;
  Index n_u = 0;
  Index n_y = 0;
  Index n_v2 = 0;
};

/// How realize_minimal treats eigenvalues of (i/4)S̃ close to the rank threshold.
enum class RankPolicy {
  Strict,        // raise NumericalRankAmbiguity
  Conservative,  // count them, adding noise channels rather than dropping one
};

/// S̃ = Θ Bu Θ_u Buᵀ Θ − ΘA − AᵀΘ − Cᵀ Θ_y C, antisymmetrized.
RealMatrix s_tilde(const StateSpace& ss);

/// Magnitude bound of the terms summed into S̃; floor for its rank threshold.
double s_tilde_scale(const StateSpace& ss);

NoiseCount noise_requirement(const StateSpace& ss, const Tolerances& tol = {});

MinimalRealization realize_minimal(const StateSpace& ss, const Tolerances& tol = {},
                                   RankPolicy policy = RankPolicy::Strict);

/// Witness (R, Λ) for a given Λ_b1 block; Λ_b0 and Λ_b2 follow from C and Bu.
RealizationWitness make_witness(const StateSpace& ss, const ComplexMatrix& lambda_b1);

/// Bv2 = Re(2iΘ[−Λ_b1†, Λ_b1ᵀ] P diag(M)).
RealMatrix additional_noise_matrix(const ComplexMatrix& lambda_b1, const Tolerances& tol = {});

/// Bv1 = ΘCᵀdiag(J).
RealMatrix feedthrough_noise_matrix(const StateSpace& ss);

RealizabilityReport check_realizable(const QuantumRealization& qr, const Tolerances& tol = {});

/// Rebuilds (A, [Bv1, Bv2, Bu], C) from a witness.
QuantumRealization reconstruct(const RealizationWitness& w, const RealizationDims& dims,
                               const Tolerances& tol = {});

}  // namespace qrealize
