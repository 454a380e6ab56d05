#pragma once

#include <string>
#include <vector>

#include "lqg.hpp"

namespace qrealize {

/// Single-mode optical cavity with two ports; port 1 carries thermal noise
/// of intensity k_n, port 2 is the control port.
struct CavityParams {
  double gamma = 0.2;
  double kappa1 = 0.1;
  double kappa2 = 0.1;
  double k_n = 0.0;

  void validate() const;
};

struct CoherentResult {
  double n_photons = 0.0;
  double rho_star = 0.0;
  Index n_v2 = 0;
  bool used_tf_path = false;
};

struct SweepRow {
  double k_n = 0.0;
  double n_no_control = 0.0;
  double n_heterodyne = 0.0;
  double n_coherent = 0.0;
  double rho_star = 0.0;
  Index n_v2 = 0;
};

Plant build_cavity_plant(const CavityParams& cp);

/// N = ⟨a†a⟩ = J/4 − 1/2 when J = ⟨x1² + x2²⟩.
inline double photons_from_cost(double j) { return j / 4.0 - 0.5; }

double no_control_photons(const CavityParams& cp, const Tolerances& tol = {});

/// Heterodyne measurement of the output plus classical LQG. The controller
/// is designed with control weight r2_design·I and evaluated with R2 = 0.
double heterodyne_photons(const CavityParams& cp, double r2_design = 1e-6, const Tolerances& tol = {});

/// Coherent quantum LQG (auxiliary design + realization + ρ search).
CoherentResult coherent_photons(const CavityParams& cp, const RhoSearchConfig& search,
                                double r2_design = 1e-6, const Tolerances& tol = {});

SweepRow sweep_row(const CavityParams& cp, const RhoSearchConfig& search, double r2_design = 1e-6,
                   const Tolerances& tol = {});

/// Rows in grid order; cp.k_n is overridden by each grid value.
std::vector<SweepRow> run_sweep(const CavityParams& cp, const std::vector<double>& kn_grid,
                                const RhoSearchConfig& search, double r2_design = 1e-6,
                                const Tolerances& tol = {});

/// {0} plus 21 log-spaced points in [1e-3, 4].
std::vector<double> default_kn_grid();

/// n points from lo to hi: log-spaced when lo > 0, linear otherwise.
std::vector<double> spaced_grid(double lo, double hi, int n);

extern const char* const kSweepHeader;

std::string format_sweep_csv(const std::vector<SweepRow>& rows);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace qrealize
