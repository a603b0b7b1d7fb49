#ifndef WEAKWHITTLE_IO_HPP
#define WEAKWHITTLE_IO_HPP

/** @file
 * Plain-text series files: one sample per line, '#' starts a comment.
 */

#include <Eigen/Dense>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "weakwhittle/spectral.hpp"

namespace weakwhittle {

inline TimeSeries read_series(std::istream& in) {
  std::vector<double> v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(line.substr(first), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": not a number");
    }
    if (line.find_first_not_of(" \t\r", first + used) != std::string::npos)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": trailing characters");
    v.push_back(x);
  }
  return TimeSeries(std::move(v));
}

inline TimeSeries read_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_series(in);
}

/// %.17g round-trips every double.
inline void write_series(std::ostream& out, const TimeSeries& ts) {
  char buf[40];
  for (double x : ts.values()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", x);
    out << buf;
  }
}

inline void write_series(const std::string& path, const TimeSeries& ts) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_series(out, ts);
}

inline std::string matrix_csv(const Eigen::MatrixXd& m, const std::string& prefix = "c") {
  std::ostringstream s;
  char buf[40];
  for (Eigen::Index j = 0; j < m.cols(); ++j) s << (j ? "," : "") << prefix << j;
  s << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.12g", m(i, j));
      s << (j ? "," : "") << buf;
    }
    s << '\n';
  }
  return s.str();
}

}  // namespace weakwhittle

#endif  // WEAKWHITTLE_IO_HPP
