#ifndef CATDIL_REPORT_HPP
#define CATDIL_REPORT_HPP

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace catdil {

inline constexpr const char *kVersion = "0.1.0";

struct ReportValue {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  std::optional<double> expected;
};

struct ReportCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Sweep rows for CSV output.
struct ReportTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ScenarioReport {
  std::string scenario;
  std::string version = kVersion;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<ReportValue> results;
  std::vector<std::pair<std::string, std::string>> notes;
  std::vector<ReportCheck> checks;
  std::optional<ReportTable> table;

  bool passed() const {
    for (const auto &c : checks) {
      if (!c.passed) {
        return false;
      }
    }
    return true;
  }

  void param(std::string key, std::string value) { parameters.emplace_back(std::move(key), std::move(value)); }
  void note(std::string key, std::string value) { notes.emplace_back(std::move(key), std::move(value)); }

  void result(std::string name, double value, double tolerance, std::optional<double> expected = std::nullopt) {
    results.push_back({std::move(name), value, tolerance, expected});
  }

  bool check(std::string name, bool passed, std::string detail = {}) {
    checks.push_back({std::move(name), passed, std::move(detail)});
    return passed;
  }
};

/// Shortest round-trip decimal rendering; "inf"/"-inf"/"nan" for non-finite.
inline std::string format_number(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) {
      break;
    }
  }
  return buf;
}

inline std::string render_text(const ScenarioReport &r) {
  std::ostringstream os;
  os << "scenario = " << r.scenario << '\n';
  os << "version = " << r.version << '\n';
  for (const auto &[k, v] : r.parameters) {
    os << "param." << k << " = " << v << '\n';
  }
  for (const auto &v : r.results) {
    os << "result." << v.name << " = " << format_number(v.value) << '\n';
    os << "result." << v.name << ".tol = " << format_number(v.tolerance) << '\n';
    if (v.expected) {
      os << "result." << v.name << ".expected = " << format_number(*v.expected) << '\n';
    }
  }
  for (const auto &[k, v] : r.notes) {
    os << "note." << k << " = " << v << '\n';
  }
  for (const auto &c : r.checks) {
    os << "check." << c.name << " = " << (c.passed ? "pass" : "fail");
    if (!c.detail.empty()) {
      os << " (" << c.detail << ')';
    }
    os << '\n';
  }
  os << "status = " << (r.passed() ? "pass" : "fail") << '\n';
  return os.str();
}

namespace detail {

inline std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char ch : s) {
    out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  }
  return out + '"';
}

} // namespace detail

/// Sweep table when present, otherwise one row per result and check.
inline std::string render_csv(const ScenarioReport &r) {
  std::ostringstream os;
  if (r.table) {
    for (std::size_t c = 0; c < r.table->columns.size(); ++c) {
      os << (c ? "," : "") << detail::csv_field(r.table->columns[c]);
    }
    os << '\n';
    for (const auto &row : r.table->rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        os << (c ? "," : "") << format_number(row[c]);
      }
      os << '\n';
    }
    return os.str();
  }
  os << "kind,name,value,tolerance,expected\n";
  for (const auto &v : r.results) {
    os << "result," << detail::csv_field(v.name) << ',' << format_number(v.value) << ','
       << format_number(v.tolerance) << ',' << (v.expected ? format_number(*v.expected) : "") << '\n';
  }
  for (const auto &c : r.checks) {
    os << "check," << detail::csv_field(c.name) << ',' << (c.passed ? "pass" : "fail") << ",,\n";
  }
  os << "status,overall," << (r.passed() ? "pass" : "fail") << ",,\n";
  return os.str();
}

inline nlohmann::json report_json(const ScenarioReport &r) {
  using nlohmann::json;
  auto number = [](double v) -> json {
    if (std::isfinite(v)) {
      return v;
    }
    return format_number(v);
  };
  json j;
  j["scenario"] = r.scenario;
  j["version"] = r.version;
  j["parameters"] = json::object();
  for (const auto &[k, v] : r.parameters) {
    j["parameters"][k] = v;
  }
  j["results"] = json::array();
  for (const auto &v : r.results) {
    json e{{"name", v.name}, {"value", number(v.value)}, {"tolerance", number(v.tolerance)}};
    if (v.expected) {
      e["expected"] = number(*v.expected);
    }
    j["results"].push_back(std::move(e));
  }
  j["notes"] = json::object();
  for (const auto &[k, v] : r.notes) {
    j["notes"][k] = v;
  }
  j["checks"] = json::array();
  for (const auto &c : r.checks) {
    j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  if (r.table) {
    j["table"] = {{"columns", r.table->columns}, {"rows", r.table->rows}};
  }
  j["status"] = r.passed() ? "pass" : "fail";
  return j;
}

inline std::string render_json(const ScenarioReport &r) { return report_json(r).dump(2) + '\n'; }

} // namespace catdil

#endif
