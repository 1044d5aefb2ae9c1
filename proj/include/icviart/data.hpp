#pragma once

#include <Eigen/Dense>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace icviart {

using Labels = std::vector<int>;

// Row-major sample matrix: one row per sample, one column per feature.
struct Dataset {
  Eigen::MatrixXd X;

  long n() const { return X.rows(); }
  long dim() const { return X.cols(); }
};

namespace detail {

inline std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  const std::string t = strip(cell);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || t.empty())
    throw std::runtime_error("csv parse error at row " + std::to_string(row) + ", column " +
                             std::to_string(col) + ": '" + cell + "' is not a number");
  if (!std::isfinite(v))
    throw std::runtime_error("csv parse error at row " + std::to_string(row) + ", column " +
                             std::to_string(col) + ": non-finite value");
  return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

// Comma-separated numeric matrix, optional single header row. Rows and
// columns in error messages are 1-based and count the header.
inline Dataset load_csv(const std::string& path, bool has_header = false) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (has_header && lineno == 1) continue;
    if (line.empty() && in.peek() == EOF) break;  // trailing newline
    const auto cells = detail::split_csv_line(line);
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) row[c] = detail::parse_cell(cells[c], lineno, c + 1);
    if (width == 0) {
      width = row.size();
    } else if (row.size() != width) {
      throw std::runtime_error("csv parse error at row " + std::to_string(lineno) + ": expected " +
                               std::to_string(width) + " cells, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("'" + path + "' contains no data rows");

  Dataset ds;
  ds.X.resize(static_cast<long>(rows.size()), static_cast<long>(width));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < width; ++c) ds.X(static_cast<long>(r), static_cast<long>(c)) = rows[r][c];
  return ds;
}

inline void save_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  char buf[64];
  for (long r = 0; r < m.rows(); ++r) {
    for (long c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
}

// One integer per line.
inline Labels load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  Labels out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::strip(line);
    if (t.empty() && in.peek() == EOF) break;
    int v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
      throw std::runtime_error("label parse error at line " + std::to_string(lineno) + ": '" + line + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::runtime_error("'" + path + "' contains no labels");
  return out;
}

inline void save_labels(const std::string& path, const Labels& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  for (int v : labels) out << v << '\n';
}

}  // namespace icviart
