#pragma once
// Report rows and documents shared by the CLI and the acceptance binary, with
// JSON and CSV emission.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gsk {

/// One verified property. Complex quantities are reported by modulus; lhs and rhs
/// describe the worst case of a battery.
struct Check {
  std::string name;
  std::string paper_ref;
  bool pass = false;
  double lhs = 0;
  double rhs = 0;
  double defect = 0;
  double tolerance = 0;
  double millis = 0;
  nlohmann::json detail = nlohmann::json::object();  // battery statistics, counts

  std::string status() const { return pass ? "pass" : "fail"; }
};

struct ReportDocument {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
  void sort() {
    std::stable_sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
  }
};

namespace detail {

// Non-finite values are not representable in JSON; they travel as strings.
inline nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace detail

inline nlohmann::json to_json(const Check& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["paper_ref"] = c.paper_ref;
  j["status"] = c.status();
  j["lhs"] = detail::number(c.lhs);
  j["rhs"] = detail::number(c.rhs);
  j["defect"] = detail::number(c.defect);
  j["tolerance"] = detail::number(c.tolerance);
  j["millis"] = c.millis;
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

inline nlohmann::json to_json(const ReportDocument& doc) {
  nlohmann::json j;
  j["suite"] = doc.suite;
  j["seed"] = doc.seed;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : doc.checks) j["checks"].push_back(to_json(c));
  return j;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string to_csv(const ReportDocument& doc) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "suite,seed,name,paper_ref,status,lhs,rhs,defect,tolerance,millis\n";
  for (const auto& c : doc.checks)
    os << csv_field(doc.suite) << ',' << doc.seed << ',' << csv_field(c.name) << ',' << csv_field(c.paper_ref) << ','
       << c.status() << ',' << c.lhs << ',' << c.rhs << ',' << c.defect << ',' << c.tolerance << ',' << c.millis
       << '\n';
  return os.str();
}

inline std::string render(const ReportDocument& doc, const std::string& format) {
  if (format == "json") return to_json(doc).dump(2) + "\n";
  if (format == "csv") return to_csv(doc);
  throw std::invalid_argument("unknown report format: " + format);
}

/// Writes the rendered report; throws std::runtime_error if the path is unwritable.
inline void emit_report(const ReportDocument& doc, const std::string& path, const std::string& format) {
  const std::string text = render(doc, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open report path: " + path);
  out << text;
  if (!out) throw std::runtime_error("cannot write report path: " + path);
}

}  // namespace gsk
