#pragma once

// JSON, CSV and gnuplot serialization. JSON carries no timestamp so identical
// runs produce identical bytes; CSV and gnuplot files start with a comment
// header naming the version, the config hash and the generation time.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ikg/conjecture.hpp"
#include "ikg/core.hpp"
#include "ikg/envelope.hpp"
#include "ikg/error.hpp"
#include "ikg/rates.hpp"

namespace ikg {

inline constexpr const char* kVersion = "0.1.0";

/// 64-bit FNV-1a, as 16 hex digits.
inline std::string config_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// 17 significant digits; infinities as "inf" / "-inf".
inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_ext(const ExtReal& v) { return v ? format_double(*v) : "-inf"; }

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_file_header(std::ostream& os, const std::string& hash, const std::string& what) {
  os << "# ikg " << kVersion << " " << what << "\n# config " << hash << "\n# generated " << utc_timestamp() << "\n";
}

// ---------------------------------------------------------------------------
// JointDist

inline nlohmann::json joint_to_json(const JointDist& p) {
  nlohmann::json m = nlohmann::json::array();
  for (std::size_t x = 0; x < p.rows(); ++x) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t y = 0; y < p.cols(); ++y) row.push_back(p(x, y));
    m.push_back(row);
  }
  nlohmann::json j{{"matrix", m}};
  if (!p.labels_x().empty()) j["labels_x"] = p.labels_x();
  if (!p.labels_y().empty()) j["labels_y"] = p.labels_y();
  return j;
}

inline JointDist joint_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("matrix") || !j["matrix"].is_array() || j["matrix"].empty()) {
    throw InvalidDistribution("expected an object with a non-empty \"matrix\" array");
  }
  const auto& m = j["matrix"];
  const std::size_t rows = m.size();
  if (!m[0].is_array()) throw InvalidDistribution("matrix rows must be arrays");
  const std::size_t cols = m[0].size();
  std::vector<double> e;
  for (const auto& row : m) {
    if (!row.is_array() || row.size() != cols) throw InvalidDistribution("ragged matrix rows");
    for (const auto& v : row) {
      if (!v.is_number()) throw InvalidDistribution("matrix entries must be numbers");
      e.push_back(v.get<double>());
    }
  }
  std::vector<std::string> lx, ly;
  if (j.contains("labels_x")) lx = j["labels_x"].get<std::vector<std::string>>();
  if (j.contains("labels_y")) ly = j["labels_y"].get<std::vector<std::string>>();
  return JointDist(rows, cols, std::move(e), std::move(lx), std::move(ly));
}

/// Parses a JSON document; syntax errors are rethrown as InvalidDistribution
/// with the parser's line and column diagnostics.
inline JointDist joint_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidDistribution(std::string("malformed JSON: ") + e.what());
  }
  try {
    return joint_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidDistribution(std::string("bad distribution document: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// GridFunctional

inline void write_grid_csv(std::ostream& os, const GridFunctional& fn) {
  const ChartGrid& g = fn.grid();
  os << "# singular_cells " << g.singular_count() << "\n";
  os << "f,g,value\n";
  for (std::size_t a = 0; a < g.f_nodes().size(); ++a)
    for (std::size_t b = 0; b < g.g_nodes().size(); ++b)
      os << format_double(g.f_nodes()[a]) << ',' << format_double(g.g_nodes()[b]) << ',' << format_ext(fn.at(a, b))
         << '\n';
}

namespace detail {

// ASCII "nonuniform matrix": first row holds the column count and the g
// nodes, every further row an f node followed by its values.
inline void write_nonuniform_matrix(std::ostream& os, const std::vector<double>& rows, const std::vector<double>& cols,
                                    const std::vector<std::string>& cells) {
  os << cols.size();
  for (double c : cols) os << ' ' << format_double(c);
  os << '\n';
  for (std::size_t a = 0; a < rows.size(); ++a) {
    os << format_double(rows[a]);
    for (std::size_t b = 0; b < cols.size(); ++b) os << ' ' << cells[a * cols.size() + b];
    os << '\n';
  }
}

}  // namespace detail

/// -infinity cells are written as NaN so gnuplot leaves them out.
inline void write_grid_gnuplot(std::ostream& os, const GridFunctional& fn) {
  std::vector<std::string> cells;
  for (const auto& v : fn.values()) cells.push_back(v ? format_double(*v) : "NaN");
  detail::write_nonuniform_matrix(os, fn.grid().f_nodes(), fn.grid().g_nodes(), cells);
}

inline nlohmann::json grid_to_json(const GridFunctional& fn) {
  nlohmann::json vals = nlohmann::json::array();
  for (const auto& v : fn.values()) vals.push_back(v ? nlohmann::json(*v) : nlohmann::json("-inf"));
  return {{"f_nodes", fn.grid().f_nodes()},
          {"g_nodes", fn.grid().g_nodes()},
          {"singular_cells", fn.grid().singular_count()},
          {"values", vals}};
}

// ---------------------------------------------------------------------------
// Rates and conjecture reports

inline void write_boundary_csv(std::ostream& os, const RateRegionBoundary& b) {
  os << "s,S,R\n";
  for (const auto& p : b.points) os << format_double(p.s) << ',' << format_double(p.S) << ',' << format_double(p.R) << '\n';
}

inline void write_boundary_gnuplot(std::ostream& os, const RateRegionBoundary& b) {
  os << "# S R s\n";
  for (const auto& p : b.points) os << format_double(p.S) << ' ' << format_double(p.R) << ' ' << format_double(p.s) << '\n';
}

inline nlohmann::json json_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline nlohmann::json boundary_to_json(const RateRegionBoundary& b) {
  nlohmann::json pts = nlohmann::json::array(), lines = nlohmann::json::array();
  for (const auto& p : b.points) pts.push_back({{"S", p.S}, {"R", p.R}, {"s", p.s}});
  for (const auto& l : b.lines) lines.push_back({{"s", l.s}, {"phi", l.phi}, {"passes", l.passes}, {"converged", l.converged}});
  return {{"rounds", b.r_rounds == kInfiniteRounds ? nlohmann::json("inf") : nlohmann::json(b.r_rounds)},
          {"mutual_information", b.mutual_information},
          {"max_line_disagreement", b.max_line_disagreement},
          {"converged", b.converged},
          {"warnings", b.warnings},
          {"points", pts},
          {"lines", lines}};
}

inline nlohmann::json report_to_json(const ConjectureReport& r) {
  return {{"step", r.step},
          {"min_gap", json_number(r.min_gap)},
          {"argmin", {{"f", r.argmin_f}, {"g", r.argmin_g}, {"epsilon", r.argmin_eps}, {"alpha", r.argmin_alpha}}},
          {"negative_count", r.negative_count},
          {"cells_scanned", r.cells_scanned},
          {"axis_counts", {{"f", r.axis_counts[0]}, {"g", r.axis_counts[1]}, {"epsilon", r.axis_counts[2]}, {"alpha", r.axis_counts[3]}}},
          {"roundoff_budget", r.roundoff_budget}};
}

inline void write_surface_gnuplot(std::ostream& os, const Surface& s) {
  std::vector<std::string> cells;
  for (double v : s.values) cells.push_back(format_double(v));
  detail::write_nonuniform_matrix(os, s.nodes, s.nodes, cells);
}

}  // namespace ikg
