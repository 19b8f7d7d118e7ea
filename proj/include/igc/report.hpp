#pragma once

// Run reports (JSON) and plot-ready CSV tables.  JSON objects keep sorted
// keys, so two runs with identical content dump identical bytes; CSV follows
// RFC 4180 (CRLF, quoting) with 17-significant-digit floats.

#include "igc/core.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace igc {

using Json = nlohmann::json;

struct CheckRow {
  std::string name;
  double expected = 0;
  double actual = kNaN;
  double tol = 0;          // absolute tolerance
  std::string source;      // "reference" | "analytic" | "definition"
  bool pass = false;
  std::string note;
};

inline CheckRow make_check(std::string name, double expected, double actual, double tol,
                           std::string source, std::string note = "") {
  CheckRow r;
  r.name = std::move(name);
  r.expected = expected;
  r.actual = actual;
  r.tol = tol;
  r.source = std::move(source);
  r.note = std::move(note);
  r.pass = std::isfinite(actual) && std::abs(actual - expected) <= tol;
  return r;
}

inline CheckRow make_rel_check(std::string name, double expected, double actual,
                               double rel_tol, std::string source, std::string note = "") {
  return make_check(std::move(name), expected, actual, rel_tol * std::abs(expected),
                    std::move(source), std::move(note));
}

// A boolean condition reported in the same table.
inline CheckRow make_flag_check(std::string name, bool ok, std::string source,
                                std::string note = "") {
  CheckRow r;
  r.name = std::move(name);
  r.expected = 1;
  r.actual = ok ? 1 : 0;
  r.tol = 0;
  r.source = std::move(source);
  r.note = std::move(note);
  r.pass = ok;
  return r;
}

struct Report {
  std::string name;
  std::string experiment;
  std::uint64_t seed = 0;
  Json settings = Json::object();
  std::vector<CheckRow> checks;
  Json metrics = Json::object();
  std::vector<std::string> caveats;
  double runtime_seconds = 0;  // excluded from determinism comparisons

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  Json to_json() const {
    Json j;
    j["name"] = name;
    j["experiment"] = experiment;
    j["seed"] = seed;
    j["settings"] = settings;
    Json rows = Json::array();
    for (const auto& c : checks) {
      Json r;
      r["name"] = c.name;
      r["expected"] = c.expected;
      r["actual"] = c.actual;
      r["tol"] = c.tol;
      r["source"] = c.source;
      r["pass"] = c.pass;
      r["note"] = c.note;
      rows.push_back(r);
    }
    j["checks"] = rows;
    j["metrics"] = metrics;
    j["caveats"] = caveats;
    j["pass"] = pass();
    j["runtime_seconds"] = runtime_seconds;
    return j;
  }

  void write(const std::filesystem::path& file) const {
    std::ofstream out(file);
    if (!out) fail_domain("cannot open report file: " + file.string());
    out << to_json().dump(2) << "\n";
  }
};

// --- CSV ----------------------------------------------------------------------

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

// One named column of doubles per entry; all columns must share a length.
inline void write_csv_columns(const std::filesystem::path& file,
                              const std::vector<std::string>& names,
                              const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size())
    fail_domain("write_csv_columns: one name per column required");
  const size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) fail_domain("write_csv_columns: ragged columns");
  std::ofstream out(file, std::ios::binary);
  if (!out) fail_domain("cannot open csv file: " + file.string());
  for (size_t i = 0; i < names.size(); ++i)
    out << (i ? "," : "") << csv_escape(names[i]);
  out << "\r\n";
  for (size_t r = 0; r < rows; ++r) {
    for (size_t i = 0; i < columns.size(); ++i)
      out << (i ? "," : "") << fmt17(columns[i][r]);
    out << "\r\n";
  }
}

// Column layout helpers for the recurring trace shapes.

inline void write_trajectory_csv(const std::filesystem::path& file,
                                 const std::vector<double>& tau,
                                 const std::vector<Vec>& theta, const std::vector<Vec>& vel,
                                 const std::vector<double>& speed) {
  const int n = theta.empty() ? 0 : static_cast<int>(theta.front().size());
  std::vector<std::string> names{"tau"};
  std::vector<std::vector<double>> cols{tau};
  for (int i = 0; i < n; ++i) {
    names.push_back("theta_" + std::to_string(i + 1));
    std::vector<double> c;
    for (const auto& th : theta) c.push_back(th[i]);
    cols.push_back(std::move(c));
  }
  for (int i = 0; i < n; ++i) {
    names.push_back("v_" + std::to_string(i + 1));
    std::vector<double> c;
    for (const auto& v : vel) c.push_back(v[i]);
    cols.push_back(std::move(c));
  }
  names.push_back("speed_norm");
  cols.push_back(speed);
  write_csv_columns(file, names, cols);
}

inline void write_volume_csv(const std::filesystem::path& file, const std::vector<double>& tau,
                             const std::vector<double>& V, const std::vector<double>& V_avg,
                             const std::vector<double>& S) {
  write_csv_columns(file, {"tau", "V", "V_avg", "S"}, {tau, V, V_avg, S});
}

inline void write_jacobi_csv(const std::filesystem::path& file, const std::vector<double>& tau,
                             const std::vector<Vec>& delta,
                             const std::vector<double>& intensity,
                             const std::vector<double>& block_intensity) {
  const int n = delta.empty() ? 0 : static_cast<int>(delta.front().size());
  std::vector<std::string> names{"tau"};
  std::vector<std::vector<double>> cols{tau};
  for (int i = 0; i < n; ++i) {
    names.push_back("delta_" + std::to_string(i + 1));
    std::vector<double> c;
    for (const auto& d : delta) c.push_back(d[i]);
    cols.push_back(std::move(c));
  }
  names.push_back("intensity");
  cols.push_back(intensity);
  names.push_back("block_intensity");
  cols.push_back(block_intensity);
  write_csv_columns(file, names, cols);
}

}  // namespace igc
