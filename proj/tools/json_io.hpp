#pragma once

#include <complex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace qrcli {

using json = nlohmann::json;

/// Malformed or inconsistent input. Maps to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense row-major matrix as exchanged with the C API.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  const double* ptr() const { return data.empty() ? nullptr : data.data(); }
  static Matrix zeros(int rows, int cols);
  static Matrix identity(int n, double scale = 1.0);
};

json read_json_file(const std::string& path);
void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where);

int read_dim(const json& obj, const char* key);
/// 2D array -> Matrix. `[]` reads as 0 x 0.
Matrix parse_matrix(const json& value, const std::string& name);
/// Checks shape; a 0-row matrix stands for rows x 0 when cols == 0 is expected.
Matrix require_shape(Matrix m, int rows, int cols, const std::string& name);

json to_json(const Matrix& m);
/// Interleaved (re, im) buffer -> array of rows of [re, im] pairs.
json complex_to_json(const std::vector<double>& interleaved, int rows, int cols);

/// Writes to `path` or standard output when empty, with a trailing newline.
void emit(const json& j, const std::string& path);

/// "lo:hi:n" (log-spaced when lo > 0, linear otherwise) or "v1,v2,...".
std::vector<double> parse_grid(const std::string& spec);

}  // namespace qrcli
