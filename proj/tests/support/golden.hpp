#pragma once

// Reference photon numbers for the default cavity (gamma = 0.2,
// kappa1 = kappa2 = 0.1), produced by a separate scipy script:
// solve_continuous_are for both AREs, solve_continuous_lyapunov for the cost,
// design R2 = 1e-6 I, evaluation R2 = 0.

namespace golden {

struct Point {
  double k_n;
  double value;
};

inline constexpr Point kHeterodyne[] = {
    {1e-3, 0.0004998751020773851},
    {0.25, 0.11803619159591827},
    {1.0, 0.4142406904252638},
    {4.0, 1.236309554004014},
};

// Best over the grid {0} ∪ logspace(-4, 4, 41) without refinement.
inline constexpr Point kCoherentGrid[] = {
    {1e-3, 0.00049950106},
    {0.1, 0.0456463},
    {1.0, 0.28880873046522726},
};

// k_n = 1, single-point grid rho = 1e6.
inline constexpr double kCoherentRho1e6 = 0.3816289895962808;

// Auxiliary controller at k_n = 1, rho = 0 (all blocks are multiples of I).
inline constexpr double kAuxAk = -547.7225848913047;
inline constexpr double kAuxBy = 0.23149479148832802;
inline constexpr double kAuxCk = 999.6838222340031;
inline constexpr double kRegulatorP = 0.00316127781828233;

}  // namespace golden
