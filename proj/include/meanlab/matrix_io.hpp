#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "meanlab/symmat.hpp"

namespace meanlab {

// 17 significant digits: enough to round-trip any double exactly.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Shared matrix file format: {"dim": n, "rows": [[...], ...]}, row-major.
// The reader symmetrizes and validates; the writer emits 17 significant digits.

inline SymMatrixd matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("rows"))
    throw DomainError("matrix JSON must be an object with 'dim' and 'rows'");
  const auto dim = j.at("dim").get<Eigen::Index>();
  const auto& rows = j.at("rows");
  if (dim < 1 || !rows.is_array() || static_cast<Eigen::Index>(rows.size()) != dim)
    throw DomainError("matrix JSON: 'rows' must hold dim rows, dim >= 1");
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto& row = rows[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim)
      throw DomainError("matrix JSON: row " + std::to_string(i) + " has wrong length");
    for (Eigen::Index k = 0; k < dim; ++k)
      m(i, k) = row[static_cast<size_t>(k)].get<double>();
  }
  return SymMatrixd(m);  // symmetrizes and rejects non-finite entries
}

inline std::string matrix_to_json(const SymMatrixd& a) {
  std::ostringstream os;
  os << "{\"dim\": " << a.dim() << ", \"rows\": [";
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    os << (i ? ", [" : "[");
    for (Eigen::Index j = 0; j < a.dim(); ++j)
      os << (j ? ", " : "") << format_double(a(i, j));
    os << "]";
  }
  os << "]}";
  return os.str();
}

inline SymMatrixd read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open matrix file: " + path);
  nlohmann::json j;
  in >> j;
  return matrix_from_json(j);
}

// Write-to-temp, rename-on-success: no partial files on error.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw DomainError("cannot open output file: " + tmp);
    out << content;
    if (!out) throw DomainError("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw DomainError("rename failed: " + path);
}

inline void write_matrix_file(const std::string& path, const SymMatrixd& a) {
  write_file_atomic(path, matrix_to_json(a) + "\n");
}

}  // namespace meanlab
