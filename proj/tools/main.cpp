#include <cmath>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "json_io.hpp"
#include "qrealize/qrealize.h"

using namespace qrcli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInput = 2;

struct ApiFailure : std::runtime_error {
  ApiFailure(qr_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
  qr_status status;
};

void call(qr_status st) {
  if (st != QR_OK) throw ApiFailure(st, std::string(qr_status_string(st)) + ": " + qr_last_error());
}

bool is_input_status(qr_status st) {
  switch (st) {
    case QR_ERR_INVALID_ARGUMENT:
    case QR_ERR_ODD_DIMENSION:
    case QR_ERR_DIMENSION_MISMATCH:
    case QR_ERR_NON_SQUARE_IO:
    case QR_ERR_INVALID_PARAMETER:
    case QR_ERR_NULL_POINTER:
      return true;
    default:
      return false;
  }
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using System = std::unique_ptr<qr_system, Deleter<qr_system, qr_system_destroy>>;
using Realization = std::unique_ptr<qr_realization, Deleter<qr_realization, qr_realization_destroy>>;
using PlantHandle = std::unique_ptr<qr_plant, Deleter<qr_plant, qr_plant_destroy>>;
using Design = std::unique_ptr<qr_design, Deleter<qr_design, qr_design_destroy>>;

struct SystemInput {
  int n = 0, n_u = 0, n_y = 0;
  Matrix a, bu, c;
  std::optional<Matrix> bv1, bv2;
  json echo;
};

SystemInput load_system(const std::string& path, bool allow_noise) {
  const json j = read_json_file(path);
  std::set<std::string> keys{"n", "n_u", "n_y", "A", "Bu", "C"};
  if (allow_noise) keys.insert({"Bv1", "Bv2"});
  reject_unknown_keys(j, keys, path);
  SystemInput in;
  in.n = read_dim(j, "n");
  in.n_u = read_dim(j, "n_u");
  in.n_y = read_dim(j, "n_y");
  for (const char* k : {"A", "Bu", "C"}) {
    if (!j.contains(k)) throw InputError(std::string("missing key '") + k + "'");
  }
  in.a = require_shape(parse_matrix(j.at("A"), "A"), in.n, in.n, "A");
  in.bu = require_shape(parse_matrix(j.at("Bu"), "Bu"), in.n, in.n_u, "Bu");
  in.c = require_shape(parse_matrix(j.at("C"), "C"), in.n_y, in.n, "C");
  if (j.contains("Bv1")) in.bv1 = require_shape(parse_matrix(j.at("Bv1"), "Bv1"), in.n, in.n_u, "Bv1");
  if (j.contains("Bv2")) {
    const Matrix m = parse_matrix(j.at("Bv2"), "Bv2");
    in.bv2 = require_shape(m, in.n, m.cols, "Bv2");
  }
  in.echo = {{"n", in.n}, {"n_u", in.n_u}, {"n_y", in.n_y}, {"A", to_json(in.a)}, {"Bu", to_json(in.bu)},
             {"C", to_json(in.c)}};
  return in;
}

System make_system(const SystemInput& in) {
  qr_system* s = nullptr;
  call(qr_system_create(in.n, in.n_u, in.n_y, in.a.ptr(), in.bu.ptr(), in.c.ptr(), &s));
  return System(s);
}

Matrix get_matrix(const qr_realization* r, qr_matrix which) {
  Matrix m;
  call(qr_realization_matrix(r, which, nullptr, 0, &m.rows, &m.cols));
  m.data.resize(static_cast<std::size_t>(m.rows) * static_cast<std::size_t>(m.cols));
  call(qr_realization_matrix(r, which, m.data.data(), m.data.size(), &m.rows, &m.cols));
  return m;
}

Matrix get_aux(const qr_design* d, qr_aux_matrix which) {
  Matrix m;
  call(qr_design_aux_matrix(d, which, nullptr, 0, &m.rows, &m.cols));
  m.data.resize(static_cast<std::size_t>(m.rows) * static_cast<std::size_t>(m.cols));
  call(qr_design_aux_matrix(d, which, m.data.data(), m.data.size(), &m.rows, &m.cols));
  return m;
}

json report_json(const qr_report& rep) {
  return {{"realizable", rep.realizable != 0},
          {"dynamics", rep.residual_dynamics},
          {"feedthrough", rep.residual_feedthrough}};
}

json realization_json(const qr_realization* r, const qr_tolerances& tol) {
  qr_realization_info info{};
  call(qr_realization_info_get(r, &info));
  qr_report rep{};
  call(qr_check_realizable(r, &tol, &rep));
  json out;
  out["A"] = to_json(get_matrix(r, QR_MAT_A));
  out["Bu"] = to_json(get_matrix(r, QR_MAT_BU));
  out["C"] = to_json(get_matrix(r, QR_MAT_C));
  out["Bv1"] = to_json(get_matrix(r, QR_MAT_BV1));
  out["Bv2"] = to_json(get_matrix(r, QR_MAT_BV2));
  out["n_v1"] = info.n_v1;
  out["n_v2"] = info.n_v2;
  if (info.has_witness) {
    int rows = 0, cols = 0;
    call(qr_realization_lambda(r, nullptr, 0, &rows, &cols));
    std::vector<double> buf(2 * static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    call(qr_realization_lambda(r, buf.data(), buf.size(), &rows, &cols));
    out["witness"] = {{"R", to_json(get_matrix(r, QR_MAT_R))}, {"Lambda", complex_to_json(buf, rows, cols)}};
  }
  if (info.has_tf_solution) {
    out["X"] = to_json(get_matrix(r, QR_MAT_X));
    out["T"] = to_json(get_matrix(r, QR_MAT_T));
    out["x1_condition"] = info.x1_condition;
  }
  out["residuals"] = report_json(rep);
  return out;
}

int cmd_check(const std::string& path, const qr_tolerances& tol) {
  const SystemInput in = load_system(path, true);
  const System sys = make_system(in);
  Matrix bv1;
  if (in.bv1) {
    bv1 = *in.bv1;
  } else {
    bv1 = Matrix::zeros(in.n, in.n_u);
    call(qr_feedthrough_noise(sys.get(), bv1.data.data(), bv1.data.size()));
  }
  const Matrix bv2 = in.bv2 ? *in.bv2 : Matrix::zeros(in.n, 0);
  qr_realization* raw = nullptr;
  call(qr_realization_create(sys.get(), bv1.ptr(), bv2.cols, bv2.ptr(), &raw));
  const Realization r(raw);
  qr_report rep{};
  call(qr_check_realizable(r.get(), &tol, &rep));
  int n_v1 = 0, n_v2_min = 0;
  call(qr_noise_requirement(sys.get(), &tol, &n_v1, &n_v2_min));

  json out;
  out["realizable"] = rep.realizable != 0;
  out["residual_dynamics"] = rep.residual_dynamics;
  out["residual_feedthrough"] = rep.residual_feedthrough;
  out["bv1_defaulted"] = !in.bv1.has_value();
  out["n_v1"] = n_v1;
  out["n_v2"] = bv2.cols;
  out["n_v2_minimal"] = n_v2_min;
  emit(out, "");
  return rep.realizable ? kExitOk : kExitNegative;
}

int cmd_realize(const std::string& path, const std::string& out_path, bool conservative,
                const qr_tolerances& tol) {
  const SystemInput in = load_system(path, false);
  const System sys = make_system(in);
  qr_realization* raw = nullptr;
  call(qr_realize_minimal(sys.get(), &tol, conservative ? 1 : 0, &raw));
  const Realization r(raw);
  json out = realization_json(r.get(), tol);
  out["input"] = in.echo;
  out["method"] = "minimal";
  emit(out, out_path);
  return kExitOk;
}

int cmd_realize_tf(const std::string& path, const std::string& out_path, const qr_tolerances& tol) {
  const SystemInput in = load_system(path, false);
  const System sys = make_system(in);
  qr_realization* raw = nullptr;
  qr_status cause = QR_OK;
  const qr_status st = qr_realize_tf(sys.get(), &tol, &raw, &cause);
  if (st == QR_ERR_NOT_REALIZABLE_WITHOUT_EXTRA_NOISE) {
    json out;
    out["input"] = in.echo;
    out["method"] = "transfer_function";
    out["realized"] = false;
    out["error"] = qr_status_string(st);
    out["cause"] = qr_status_string(cause);
    out["message"] = qr_last_error();
    emit(out, out_path);
    return kExitNegative;
  }
  call(st);
  const Realization r(raw);
  json out = realization_json(r.get(), tol);
  out["input"] = in.echo;
  out["method"] = "transfer_function";
  out["realized"] = true;
  emit(out, out_path);
  return kExitOk;
}

struct LqgArgs {
  std::string plant_path;
  std::string r1 = "I";
  double r2_design = 1e-6;
  double r2_eval = 0.0;
  std::string rho_grid;
  int refine = 20;
  std::string out_path;
};

int cmd_lqg(const LqgArgs& args, const qr_tolerances& tol) {
  const json j = read_json_file(args.plant_path);
  reject_unknown_keys(j, {"n", "n_u", "n_y", "n_w1", "A", "Bu", "C", "Bw1", "Du", "Dw1", "Sw1"}, args.plant_path);
  const int n = read_dim(j, "n"), n_u = read_dim(j, "n_u"), n_y = read_dim(j, "n_y");
  for (const char* k : {"A", "Bu", "C", "Bw1", "Du", "Dw1", "Sw1"}) {
    if (!j.contains(k)) throw InputError(std::string("missing key '") + k + "'");
  }
  const Matrix bw1_raw = parse_matrix(j.at("Bw1"), "Bw1");
  const int n_w1 = j.contains("n_w1") ? read_dim(j, "n_w1") : bw1_raw.cols;
  const Matrix a = require_shape(parse_matrix(j.at("A"), "A"), n, n, "A");
  const Matrix bu = require_shape(parse_matrix(j.at("Bu"), "Bu"), n, n_u, "Bu");
  const Matrix c = require_shape(parse_matrix(j.at("C"), "C"), n_y, n, "C");
  const Matrix bw1 = require_shape(bw1_raw, n, n_w1, "Bw1");
  const Matrix du = require_shape(parse_matrix(j.at("Du"), "Du"), n_y, n_u, "Du");
  const Matrix dw1 = require_shape(parse_matrix(j.at("Dw1"), "Dw1"), n_y, n_w1, "Dw1");
  const Matrix sw1 = require_shape(parse_matrix(j.at("Sw1"), "Sw1"), n_w1, n_w1, "Sw1");

  qr_plant* raw_plant = nullptr;
  call(qr_plant_create(n, n_u, n_y, n_w1, a.ptr(), bu.ptr(), bw1.ptr(), c.ptr(), du.ptr(), dw1.ptr(), sw1.ptr(),
                       &raw_plant));
  const PlantHandle plant(raw_plant);

  const Matrix r1 = args.r1 == "I" ? Matrix::identity(n)
                                   : require_shape(parse_matrix(read_json_file(args.r1), "R1"), n, n, "R1");
  const Matrix r2d = Matrix::identity(n_u, args.r2_design);
  const Matrix r2e = Matrix::identity(n_u, args.r2_eval);
  std::vector<double> grid;
  if (!args.rho_grid.empty()) grid = parse_grid(args.rho_grid);

  qr_design_options opts = qr_design_options_default();
  opts.r1 = r1.ptr();
  opts.r2_design = r2d.ptr();
  opts.r2_eval = r2e.ptr();
  if (!grid.empty()) {
    opts.search.rho_grid = grid.data();
    opts.search.rho_grid_len = grid.size();
  }
  opts.search.refine_iters = args.refine;

  qr_design* raw_design = nullptr;
  call(qr_design_run(plant.get(), &opts, &tol, &raw_design));
  const Design d(raw_design);
  qr_design_summary sum{};
  call(qr_design_summary_get(d.get(), &sum));
  qr_realization* raw_ctrl = nullptr;
  call(qr_design_controller(d.get(), &raw_ctrl));
  const Realization ctrl(raw_ctrl);

  json out;
  out["plant"] = {{"n", n}, {"n_u", n_u}, {"n_y", n_y}, {"n_w1", n_w1}, {"A", to_json(a)}, {"Bu", to_json(bu)},
                  {"C", to_json(c)}, {"Bw1", to_json(bw1)}, {"Du", to_json(du)}, {"Dw1", to_json(dw1)},
                  {"Sw1", to_json(sw1)}};
  out["rho_star"] = sum.rho_star;
  out["J"] = sum.j;
  out["used_tf_path"] = sum.used_tf_path != 0;
  out["n_v2"] = sum.n_v2;
  out["controller"] = realization_json(ctrl.get(), tol);
  out["aux"] = {{"A_K", to_json(get_aux(d.get(), QR_AUX_A_K))}, {"B_y", to_json(get_aux(d.get(), QR_AUX_B_Y))},
                {"C_K", to_json(get_aux(d.get(), QR_AUX_C_K))}, {"F", to_json(get_aux(d.get(), QR_AUX_F))},
                {"K", to_json(get_aux(d.get(), QR_AUX_K))},     {"P", to_json(get_aux(d.get(), QR_AUX_P))},
                {"Q", to_json(get_aux(d.get(), QR_AUX_Q))}};
  json evals = json::array();
  for (std::size_t i = 0; i < sum.n_evaluations; ++i) {
    qr_rho_evaluation e{};
    call(qr_design_evaluation(d.get(), i, &e));
    evals.push_back({{"rho", e.rho},
                     {"accepted", e.accepted != 0},
                     {"J", e.accepted ? json(e.j) : json(nullptr)},
                     {"used_tf_path", e.used_tf_path != 0},
                     {"n_v2", e.n_v2}});
  }
  out["evaluations"] = std::move(evals);
  emit(out, args.out_path);
  return kExitOk;
}

struct CavityArgs {
  qr_cavity_params params = qr_cavity_params_default();
  std::string kn_grid;
  std::string rho_grid;
  int refine = 20;
  double r2_design = 1e-6;
  std::string out_path;
};

int cmd_cavity(const CavityArgs& args, const qr_tolerances& tol) {
  std::vector<double> kn;
  if (!args.kn_grid.empty()) kn = parse_grid(args.kn_grid);
  std::vector<double> rho;
  if (!args.rho_grid.empty()) rho = parse_grid(args.rho_grid);
  qr_search search = qr_search_default();
  if (!rho.empty()) {
    search.rho_grid = rho.data();
    search.rho_grid_len = rho.size();
  }
  search.refine_iters = args.refine;
  size_t n_rows = 0;
  call(qr_cavity_run_sweep(&args.params, kn.empty() ? nullptr : kn.data(), kn.size(), &search, args.r2_design,
                           &tol, args.out_path.c_str(), nullptr, 0, &n_rows));
  std::cerr << "wrote " << n_rows << " rows to " << args.out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physical realizability and coherent LQG for linear quantum systems"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(qr_version()));

  qr_tolerances tol = qr_tolerances_default();
  app.add_option("--tol-residual", tol.residual_abs, "Residual tolerance")->capture_default_str();
  app.add_option("--tol-rank", tol.rank_rel, "Relative rank threshold")->capture_default_str();
  app.add_option("--tol-imag", tol.imag_axis_rel, "Imaginary-axis tolerance")->capture_default_str();

  std::string system_path, out_path;
  bool conservative = false;

  auto* check = app.add_subcommand("check", "Check physical realizability (exit 0 yes, 1 no, 2 bad input)");
  check->add_option("system", system_path, "system.json")->required();

  auto* realize = app.add_subcommand("realize", "Minimal-noise realization with witness");
  realize->add_option("system", system_path, "system.json")->required();
  realize->add_option("--out", out_path, "Output file (default: stdout)");
  realize->add_flag("--conservative", conservative, "Count borderline eigenvalues instead of failing");

  auto* realize_tf = app.add_subcommand("realize-tf", "Zero-additional-noise realization of the transfer function");
  realize_tf->add_option("system", system_path, "system.json")->required();
  realize_tf->add_option("--out", out_path, "Output file (default: stdout)");

  LqgArgs lqg_args;
  auto* lqg = app.add_subcommand("lqg", "Coherent LQG design");
  lqg->add_option("--plant", lqg_args.plant_path, "plant.json")->required();
  lqg->add_option("--r1", lqg_args.r1, "State weight: JSON file with a 2D array, or I")->capture_default_str();
  lqg->add_option("--r2-design", lqg_args.r2_design, "Design control weight (times I)")->capture_default_str();
  lqg->add_option("--r2-eval", lqg_args.r2_eval, "Evaluation control weight (times I)")->capture_default_str();
  lqg->add_option("--rho-grid", lqg_args.rho_grid, "lo:hi:n or comma list (default {0} + logspace(-4, 4, 41))");
  lqg->add_option("--refine", lqg_args.refine, "Golden-section refinement steps")->capture_default_str();
  lqg->add_option("--out", lqg_args.out_path, "Output file (default: stdout)");

  CavityArgs cav;
  auto* cavity = app.add_subcommand("cavity", "Optical cavity photon-number sweep to CSV");
  cavity->add_option("--gamma", cav.params.gamma)->capture_default_str();
  cavity->add_option("--kappa1", cav.params.kappa1)->capture_default_str();
  cavity->add_option("--kappa2", cav.params.kappa2)->capture_default_str();
  cavity->add_option("--kn-grid", cav.kn_grid, "lo:hi:n or comma list (default {0} + logspace(1e-3, 4, 21))");
  cavity->add_option("--rho-grid", cav.rho_grid, "lo:hi:n or comma list");
  cavity->add_option("--refine", cav.refine, "Golden-section refinement steps")->capture_default_str();
  cavity->add_option("--r2-design", cav.r2_design, "Design control weight (times I)")->capture_default_str();
  cavity->add_option("--out", cav.out_path, "CSV output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*check) return cmd_check(system_path, tol);
    if (*realize) return cmd_realize(system_path, out_path, conservative, tol);
    if (*realize_tf) return cmd_realize_tf(system_path, out_path, tol);
    if (*lqg) return cmd_lqg(lqg_args, tol);
    if (*cavity) return cmd_cavity(cav, tol);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ApiFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_input_status(e.status) ? kExitInput : kExitNegative;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNegative;
  }
  return kExitInput;
}
