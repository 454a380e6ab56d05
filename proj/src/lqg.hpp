#pragma once

#include <vector>

#include "tf_realization.hpp"

namespace qrealize {

/// Quantum plant
///   dx = A x dt + Bu du + Bw1 dw1
///   dy = C x dt + Du du + Dw1 dw1,   dw1 of intensity Sw1.
struct Plant {
  RealMatrix a;
  RealMatrix bu;
  RealMatrix bw1;
  RealMatrix c;
  RealMatrix du;
  RealMatrix dw1;
  RealMatrix s_w1;

  Index n() const { return a.rows(); }
  Index n_u() const { return bu.cols(); }
  Index n_y() const { return c.rows(); }
  Index n_w1() const { return bw1.cols(); }
};

void validate(const Plant& p);

/// Classical controller dx_K = A_K x_K dt + B_y dy, du = C_K x_K dt, plus the
/// regulator/estimator quantities it was built from.
struct AuxController {
  RealMatrix a_k;
  RealMatrix b_y;
  RealMatrix c_k;
  RealMatrix f;  // regulator gain
  RealMatrix k;  // estimator gain
  RealMatrix p;  // regulator ARE solution
  RealMatrix q;  // estimator ARE solution

  StateSpace as_state_space() const { return StateSpace::from_matrices(a_k, b_y, c_k); }
};

struct ClosedLoop {
  RealMatrix a_cl;
  RealMatrix b_cl;
  RealMatrix s_wcl;
  RealMatrix r_bar;
};

struct ControllerRealization {
  QuantumRealization controller;
  bool used_tf_path = false;
};

struct RhoSearchConfig {
  std::vector<double> grid;  // all ρ ≥ 0, non-empty
  int refine_iters = 20;     // golden-section steps around the best grid point

  /// {0} ∪ 41 log-spaced points in [1e-4, 1e4], 20 refinement steps.
  static RhoSearchConfig defaults();
  void validate() const;
};

struct DesignWeights {
  RealMatrix r1;         // state weight
  RealMatrix r2_design;  // control weight used to synthesize the auxiliary controller
  RealMatrix r2_eval;    // control weight used to evaluate the cost
  RealMatrix s_v1;       // intensity assigned to dv1 in the auxiliary problem
};

struct RhoEvaluation {
  double rho = 0.0;
  bool accepted = false;  // false: closed loop not Hurwitz or synthesis failed
  double j = 0.0;
  bool used_tf_path = false;
  Index n_v2 = 0;
};

struct DesignResult {
  double rho_star = 0.0;
  QuantumRealization controller;
  AuxController aux;
  double j = 0.0;
  bool used_tf_path = false;
  std::vector<RhoEvaluation> evaluations;  // in evaluation order
};

/// Standard LQG for dx = A x + Bu du + G dw, dy = C x + Du du + H dw with
/// noise intensity S and cost weights (r1, r2).
AuxController classical_lqg(const RealMatrix& a, const RealMatrix& bu, const RealMatrix& c,
                            const RealMatrix& du, const RealMatrix& g, const RealMatrix& h,
                            const RealMatrix& s_noise, const RealMatrix& r1, const RealMatrix& r2,
                            const Tolerances& tol = {});

/// Auxiliary classical LQG with inflated control weight (1 + ρ)·r2.
AuxController aux_lqg(const Plant& p, const RealMatrix& r1, const RealMatrix& r2,
                      const RealMatrix& s_v1, double rho, const Tolerances& tol = {});

/// Tries the zero-additional-noise (transfer function) realization first and
/// falls back to the minimal-noise realization of the given coordinates.
ControllerRealization realize_controller(const AuxController& k, const Tolerances& tol = {});

ClosedLoop closed_loop(const Plant& p, const QuantumRealization& qc, const RealMatrix& r1,
                       const RealMatrix& r2);

/// J = Tr(R̄ Q̄) with 𝒜Q̄ + Q̄𝒜ᵀ + ℬ S ℬᵀ = 0.
double cost(const ClosedLoop& cl, const Tolerances& tol = {});

DesignResult design(const Plant& p, const DesignWeights& weights, const RhoSearchConfig& search,
                    const Tolerances& tol = {});

}  // namespace qrealize
