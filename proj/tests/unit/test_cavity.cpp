#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cavity.hpp"
#include "golden.hpp"
#include "helpers.hpp"

using namespace qrealize;

namespace {

CavityParams at(double k_n) {
  CavityParams cp;
  cp.k_n = k_n;
  return cp;
}

}  // namespace

TEST_SUITE("cavity") {
  TEST_CASE("build_cavity_plant") {
    const Plant p = build_cavity_plant(at(0.0));
    const RealMatrix i2 = RealMatrix::Identity(2, 2);
    CHECK((p.a + 0.1 * i2).norm() < 1e-16);
    CHECK((p.bu + std::sqrt(0.1) * i2).norm() < 1e-16);
    CHECK((p.bw1 - std::sqrt(0.1) * i2).norm() < 1e-16);
    CHECK((p.c - std::sqrt(0.1) * i2).norm() < 1e-16);
    CHECK(p.du == i2);
    CHECK(p.dw1.norm() == 0.0);
    CHECK(p.s_w1 == i2);
    CHECK(build_cavity_plant(at(1.0)).s_w1 == 3 * i2);
    CavityParams bad;
    bad.kappa2 = 0.0;
    CHECK_ERROR_CODE(build_cavity_plant(bad), ErrorCode::InvalidParameter);
    CHECK_ERROR_CODE(build_cavity_plant(at(-0.1)), ErrorCode::InvalidParameter);
  }

  TEST_CASE("no-control photon number is k_n / 2") {
    CHECK(std::abs(no_control_photons(at(0.0))) <= 1e-10);
    CHECK(std::abs(no_control_photons(at(1.0)) - 0.5) <= 1e-10);
    CHECK(std::abs(no_control_photons(at(4.0)) - 2.0) <= 1e-10);
    for (double k_n : default_kn_grid()) CHECK(std::abs(no_control_photons(at(k_n)) - k_n / 2) <= 1e-10);
  }

  TEST_CASE("heterodyne photon numbers match the reference") {
    for (const golden::Point& g : golden::kHeterodyne) {
      CHECK(heterodyne_photons(at(g.k_n)) == doctest::Approx(g.value).epsilon(1e-8));
    }
    CHECK_ERROR_CODE(heterodyne_photons(at(1.0), 0.0), ErrorCode::InvalidParameter);
  }

  TEST_CASE("coherent photon numbers are at or below the grid reference") {
    for (const golden::Point& g : golden::kCoherentGrid) {
      const CoherentResult c = coherent_photons(at(g.k_n), RhoSearchConfig::defaults());
      CHECK(c.n_photons <= g.value * (1 + 1e-6));  // reference values carry 7+ digits
      CHECK(c.n_photons >= g.value * (1 - 1e-3));
    }
    RhoSearchConfig s;
    s.grid = {1e6};
    const double heavy = coherent_photons(at(1.0), s).n_photons;
    CHECK(heavy == doctest::Approx(golden::kCoherentRho1e6).epsilon(1e-9));
    // A heavy control penalty does not recover the no-control value.
    CHECK(coherent_photons(at(1.0), RhoSearchConfig::defaults()).n_photons <= heavy);
    CHECK(heavy < no_control_photons(at(1.0)));
  }

  TEST_CASE("sweep orderings, monotonicity and vacuum floor over the default grid") {
    const std::vector<SweepRow> rows = run_sweep(CavityParams{}, default_kn_grid(), RhoSearchConfig::defaults());
    REQUIRE(rows.size() == 22);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const SweepRow& r = rows[i];
      if (r.k_n > 0) CHECK(r.n_coherent <= r.n_heterodyne + 1e-9);
      CHECK(r.n_coherent <= r.n_no_control + 1e-9);
      CHECK(r.n_no_control >= -1e-9);
      CHECK(r.n_heterodyne >= -1e-9);
      CHECK(r.n_coherent >= -1e-9);
      if (i > 0) {
        CHECK(r.n_no_control >= rows[i - 1].n_no_control);
        CHECK(r.n_heterodyne >= rows[i - 1].n_heterodyne);
        CHECK(r.n_coherent >= rows[i - 1].n_coherent);
      }
    }
  }

  TEST_CASE("grids") {
    const std::vector<double> g = default_kn_grid();
    CHECK(g.size() == 22);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 1e-3);
    CHECK(g.back() == 4.0);
    const std::vector<double> lin = spaced_grid(0.0, 1.0, 5);
    CHECK(lin[2] == doctest::Approx(0.5));
    const std::vector<double> lg = spaced_grid(1.0, 100.0, 3);
    CHECK(lg[1] == doctest::Approx(10.0));
    CHECK(spaced_grid(3.0, 3.0, 1).size() == 1);
    CHECK_ERROR_CODE(spaced_grid(1.0, 0.5, 3), ErrorCode::InvalidParameter);
    CHECK_ERROR_CODE(spaced_grid(0.0, 1.0, 0), ErrorCode::InvalidParameter);
    CHECK_ERROR_CODE(run_sweep(CavityParams{}, {}, RhoSearchConfig::defaults()), ErrorCode::InvalidParameter);
  }

  TEST_CASE("csv format") {
    const std::vector<SweepRow> rows = run_sweep(CavityParams{}, {0.5, 1.0}, RhoSearchConfig::defaults());
    const std::string csv = format_sweep_csv(rows);
    std::istringstream in(csv);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "k_n,N_no_control,N_heterodyne,N_coherent,rho_star,n_v2");
    CHECK(lines[1].rfind("0.5,0.25,", 0) == 0);
    CHECK(lines[2].rfind("1,0.5,", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(csv.back() == '\n');
    CHECK(format_sweep_csv(rows) == csv);
  }

  TEST_CASE("csv file writing") {
    const auto dir = std::filesystem::temp_directory_path();
    const std::string path = (dir / "qrealize_unit_sweep.csv").string();
    const std::vector<SweepRow> rows = run_sweep(CavityParams{}, {1.0}, RhoSearchConfig::defaults());
    write_sweep_csv(rows, path);
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == format_sweep_csv(rows));
    std::filesystem::remove(path);
    CHECK_ERROR_CODE(write_sweep_csv(rows, "/nonexistent-dir/x.csv"), ErrorCode::IoError);
  }
}
