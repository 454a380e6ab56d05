#include "json_io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qrealize/qrealize.h"

namespace qrcli {

Matrix Matrix::zeros(int rows, int cols) {
  Matrix m;
  m.rows = rows;
  m.cols = cols;
  m.data.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
  return m;
}

Matrix Matrix::identity(int n, double scale) {
  Matrix m = zeros(n, n);
  for (int i = 0; i < n; ++i) m.data[static_cast<std::size_t>(i * n + i)] = scale;
  return m;
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + ": expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw InputError(where + ": unknown key '" + key + "'");
  }
}

int read_dim(const json& obj, const char* key) {
  if (!obj.contains(key)) throw InputError(std::string("missing key '") + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw InputError(std::string("'") + key + "' must be an integer");
  const long long d = v.get<long long>();
  if (d < 0 || d > 100000) throw InputError(std::string("'") + key + "' out of range");
  return static_cast<int>(d);
}

Matrix parse_matrix(const json& value, const std::string& name) {
  if (!value.is_array()) throw InputError(name + " must be a 2D array");
  Matrix m;
  m.rows = static_cast<int>(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    const json& row = value[i];
    if (!row.is_array()) throw InputError(name + " must be a 2D array");
    if (i == 0) m.cols = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != m.cols) throw InputError(name + " has rows of different lengths");
    for (const json& x : row) {
      if (!x.is_number()) throw InputError(name + " must contain only numbers");
      const double v = x.get<double>();
      if (!std::isfinite(v)) throw InputError(name + " must contain finite numbers");
      m.data.push_back(v);
    }
  }
  return m;
}

Matrix require_shape(Matrix m, int rows, int cols, const std::string& name) {
  if (cols == 0 && m.cols == 0 && (m.rows == 0 || m.rows == rows)) {
    m.rows = rows;
    return m;
  }
  if (m.rows != rows || m.cols != cols) {
    std::ostringstream os;
    os << name << " is " << m.rows << " x " << m.cols << ", expected " << rows << " x " << cols;
    throw InputError(os.str());
  }
  return m;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (int i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(m.data[static_cast<std::size_t>(i * m.cols + j)]);
    out.push_back(std::move(row));
  }
  return out;
}

json complex_to_json(const std::vector<double>& interleaved, int rows, int cols) {
  json out = json::array();
  for (int i = 0; i < rows; ++i) {
    json row = json::array();
    for (int j = 0; j < cols; ++j) {
      const std::size_t k = 2 * static_cast<std::size_t>(i * cols + j);
      row.push_back(json::array({interleaved[k], interleaved[k + 1]}));
    }
    out.push_back(std::move(row));
  }
  return out;
}

void emit(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path);
}

std::vector<double> parse_grid(const std::string& spec) {
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw InputError("");
      return v;
    } catch (const std::exception&) {
      throw InputError("bad number '" + s + "' in grid '" + spec + "'");
    }
  };
  std::vector<std::string> parts;
  const char sep = spec.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, sep);) parts.push_back(item);

  if (sep == ',') {
    std::vector<double> out;
    for (const std::string& p : parts) out.push_back(number(p));
    if (out.empty()) throw InputError("empty grid");
    return out;
  }
  if (parts.size() != 3) throw InputError("grid must be lo:hi:n, got '" + spec + "'");
  const double lo = number(parts[0]);
  const double hi = number(parts[1]);
  const double count = number(parts[2]);
  if (count < 1 || count > 100000 || std::floor(count) != count) throw InputError("grid count must be a positive integer");
  std::vector<double> out(static_cast<std::size_t>(count));
  const qr_status st = qr_spaced_grid(lo, hi, static_cast<int>(count), out.data(), out.size());
  if (st != QR_OK) throw InputError(std::string("invalid grid '") + spec + "': " + qr_last_error());
  return out;
}

}  // namespace qrcli
