#pragma once

// Matrix JSON: {"rows": n, "cols": m, "data": [[re, im], ...]} in row-major order.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qnrlab/linalg.hpp"

namespace qnrlab {

using json = nlohmann::json;

inline json matrix_to_json(const CMatrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline json vector_to_json(const CVector& v) {
  json data = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back({v(i).real(), v(i).imag()});
  return data;
}

inline CMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    throw Error(Errc::ParseError, "matrix JSON needs rows, cols and data");
  }
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer()) {
    throw Error(Errc::ParseError, "rows and cols must be integers");
  }
  const auto rows = j["rows"].get<long long>();
  const auto cols = j["cols"].get<long long>();
  if (rows <= 0 || cols <= 0) throw Error(Errc::ParseError, "rows and cols must be positive");
  const json& data = j["data"];
  if (!data.is_array() || static_cast<long long>(data.size()) != rows * cols) {
    throw Error(Errc::ParseError, "data must hold exactly rows*cols entries (expected " +
                                      std::to_string(rows * cols) + ")");
  }
  CMatrix m(rows, cols);
  for (long long k = 0; k < rows * cols; ++k) {
    const json& e = data[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw Error(Errc::ParseError, "entry " + std::to_string(k) + " is not a [re, im] pair");
    }
    m(k / cols, k % cols) = cplx(e[0].get<double>(), e[1].get<double>());
  }
  if (!all_finite(m)) throw Error(Errc::ParseError, "matrix entries must be finite");
  return m;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, path + ": " + e.what());
  }
}

inline CMatrix read_matrix_file(const std::string& path) { return matrix_from_json(read_json_file(path)); }

}  // namespace qnrlab
