#pragma once

// Output helpers shared by the CLI and the acceptance suite. Machine formats
// carry 12 significant digits so reruns compare byte for byte.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dimerlab::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "dimerlab.report/v1";

inline std::string fmt12(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);  // folds -0 into 0
  return buf;
}

/// x rounded to 12 significant digits, so JSON emits at most that many.
inline double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(fmt12(x).c_str(), nullptr);
}

inline Json num(double x) {
  if (!std::isfinite(x)) return Json(fmt12(x));
  return Json(round12(x));
}

/// A rectangular table that renders as aligned text or CSV.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }

  void write_csv(std::ostream& os) const {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(columns);
    for (const auto& r : rows) line(r);
  }

  void write_text(std::ostream& os) const {
    std::vector<std::size_t> width(columns.size(), 0);
    for (std::size_t i = 0; i < columns.size(); ++i) width[i] = columns[i].size();
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        os << (i ? "  " : "") << cells[i];
        if (i + 1 < cells.size()) os << std::string(width[i] - cells[i].size(), ' ');
      }
      os << '\n';
    };
    line(columns);
    for (const auto& r : rows) line(r);
  }
};

}  // namespace dimerlab::report
