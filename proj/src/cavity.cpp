#include "cavity.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <locale>
#include <sstream>

#include "error.hpp"

namespace qrealize {

const char* const kSweepHeader = "k_n,N_no_control,N_heterodyne,N_coherent,rho_star,n_v2";

namespace {

RealMatrix eye2() { return RealMatrix::Identity(2, 2); }

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorCode::InvalidParameter, std::string(name) + " must be > 0");
}

}  // namespace

void CavityParams::validate() const {
  require_positive(gamma, "gamma");
  require_positive(kappa1, "kappa1");
  require_positive(kappa2, "kappa2");
  if (!(k_n >= 0.0) || !std::isfinite(k_n)) fail(ErrorCode::InvalidParameter, "k_n must be finite and >= 0");
}

Plant build_cavity_plant(const CavityParams& cp) {
  cp.validate();
  Plant p;
  p.a = -(cp.gamma / 2.0) * eye2();
  p.bu = -std::sqrt(cp.kappa2) * eye2();
  p.bw1 = std::sqrt(cp.kappa1) * eye2();
  p.c = std::sqrt(cp.kappa2) * eye2();
  p.du = eye2();
  p.dw1 = RealMatrix::Zero(2, 2);
  p.s_w1 = (1.0 + 2.0 * cp.k_n) * eye2();
  return p;
}

double no_control_photons(const CavityParams& cp, const Tolerances& tol) {
  const Plant p = build_cavity_plant(cp);
  // du = dv1: the control port only feeds vacuum into the cavity.
  ClosedLoop cl;
  cl.a_cl = p.a;
  cl.b_cl.resize(2, 4);
  cl.b_cl << p.bw1, p.bu;
  cl.s_wcl = block_diag({p.s_w1, eye2()});
  cl.r_bar = eye2();
  return photons_from_cost(cost(cl, tol));
}

double heterodyne_photons(const CavityParams& cp, double r2_design, const Tolerances& tol) {
  require_positive(r2_design, "r2_design");
  const Plant p = build_cavity_plant(cp);

  // Noise vector (w1, w2, w3): w2 is the heterodyne vacuum added to y, w3
  // the vacuum entering through the control port.
  RealMatrix b_w(2, 6);
  b_w << -std::sqrt(cp.kappa1) * eye2(), RealMatrix::Zero(2, 2), -std::sqrt(cp.kappa2) * eye2();
  RealMatrix d_w(2, 6);
  d_w << RealMatrix::Zero(2, 2), eye2(), eye2();
  const RealMatrix s_w = block_diag({p.s_w1, eye2(), eye2()});

  const AuxController k =
      classical_lqg(p.a, p.bu, p.c, p.du, b_w, d_w, s_w, eye2(), r2_design * eye2(), tol);

  ClosedLoop cl;
  cl.a_cl.resize(4, 4);
  cl.a_cl << p.a, p.bu * k.c_k, k.b_y * p.c, k.a_k + k.b_y * p.du * k.c_k;
  cl.b_cl.resize(4, 6);
  cl.b_cl << b_w, k.b_y * d_w;
  cl.s_wcl = s_w;
  cl.r_bar = block_diag({eye2(), RealMatrix::Zero(2, 2)});  // evaluated with R2 = 0
  return photons_from_cost(cost(cl, tol));
}

CoherentResult coherent_photons(const CavityParams& cp, const RhoSearchConfig& search, double r2_design,
                                const Tolerances& tol) {
  require_positive(r2_design, "r2_design");
  const Plant p = build_cavity_plant(cp);
  DesignWeights w;
  w.r1 = eye2();
  w.r2_design = r2_design * eye2();
  w.r2_eval = RealMatrix::Zero(2, 2);
  w.s_v1 = eye2();
  const DesignResult d = design(p, w, search, tol);
  CoherentResult out;
  out.n_photons = photons_from_cost(d.j);
  out.rho_star = d.rho_star;
  out.n_v2 = d.controller.n_v2();
  out.used_tf_path = d.used_tf_path;
  return out;
}

SweepRow sweep_row(const CavityParams& cp, const RhoSearchConfig& search, double r2_design,
                   const Tolerances& tol) {
  SweepRow row;
  row.k_n = cp.k_n;
  row.n_no_control = no_control_photons(cp, tol);
  row.n_heterodyne = heterodyne_photons(cp, r2_design, tol);
  const CoherentResult coh = coherent_photons(cp, search, r2_design, tol);
  row.n_coherent = coh.n_photons;
  row.rho_star = coh.rho_star;
  row.n_v2 = coh.n_v2;
  return row;
}

std::vector<SweepRow> run_sweep(const CavityParams& cp, const std::vector<double>& kn_grid,
                                const RhoSearchConfig& search, double r2_design, const Tolerances& tol) {
  if (kn_grid.empty()) fail(ErrorCode::InvalidParameter, "k_n grid must not be empty");
  std::vector<SweepRow> rows;
  rows.reserve(kn_grid.size());
  for (double kn : kn_grid) {
    CavityParams c = cp;
    c.k_n = kn;
    rows.push_back(sweep_row(c, search, r2_design, tol));
  }
  return rows;
}

std::vector<double> default_kn_grid() {
  std::vector<double> grid{0.0};
  const std::vector<double> tail = spaced_grid(1e-3, 4.0, 21);
  grid.insert(grid.end(), tail.begin(), tail.end());
  return grid;
}

std::vector<double> spaced_grid(double lo, double hi, int n) {
  if (n < 1) fail(ErrorCode::InvalidParameter, "grid needs at least one point");
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || hi < lo) {
    fail(ErrorCode::InvalidParameter, "grid bounds must satisfy 0 <= lo <= hi");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  if (n == 1) return {lo};
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    if (lo > 0.0) {
      out.push_back(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))));
    } else {
      out.push_back(lo + t * (hi - lo));
    }
  }
  // Pin the endpoints exactly.
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(12);
  os << kSweepHeader << '\n';
  for (const SweepRow& r : rows) {
    os << r.k_n << ',' << r.n_no_control << ',' << r.n_heterodyne << ',' << r.n_coherent << ','
       << r.rho_star << ',' << r.n_v2 << '\n';
  }
  return os.str();
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  f << format_sweep_csv(rows);
  f.flush();
  if (!f) fail(ErrorCode::IoError, "failed writing " + path);
}

}  // namespace qrealize
