// gsk: verification suites, parameter scans and single evaluations.
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage, configuration or I/O error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gsk/suites.hpp"

namespace {

using gsk::Complex;
using gsk::GaussianInt;
using json = nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Argument parsing.

const std::string kNum = R"((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";

/// "a", "bi", "a+bi", "a-i", "-i" with real a, b.
Complex parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  static const std::regex imag_only("^([+-]?)(" + kNum + ")?i$");
  static const std::regex full("^([+-]?" + kNum + ")(?:([+-])(" + kNum + ")?i)?$");
  std::smatch m;
  if (std::regex_match(s, m, imag_only)) {
    const double b = m[2].matched ? std::stod(m[2]) : 1.0;
    return {0.0, m[1] == "-" ? -b : b};
  }
  if (std::regex_match(s, m, full)) {
    const double a = std::stod(m[1]);
    if (!m[2].matched) return a;
    const double b = m[3].matched ? std::stod(m[3]) : 1.0;
    return {a, m[2] == "-" ? -b : b};
  }
  throw UsageError("cannot parse complex number: " + text);
}

GaussianInt parse_gaussian(const std::string& text) {
  const Complex z = parse_complex(text);
  if (z.real() != std::round(z.real()) || z.imag() != std::round(z.imag()) || std::abs(z.real()) > 1e15 ||
      std::abs(z.imag()) > 1e15)
    throw UsageError("not a Gaussian integer: " + text);
  return {static_cast<std::int64_t>(z.real()), static_cast<std::int64_t>(z.imag())};
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("cannot parse number list: " + text);
    }
  }
  if (out.empty()) throw UsageError("empty number list");
  return out;
}

/// "a..b" expands to a, 4a, 16a, ... up to b; otherwise a comma list.
std::vector<double> parse_X_grid(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) return parse_list(text);
  const auto lo = parse_list(text.substr(0, dots)), hi = parse_list(text.substr(dots + 2));
  if (lo.size() != 1 || hi.size() != 1 || !(lo[0] > 0) || hi[0] < lo[0]) throw UsageError("bad range: " + text);
  std::vector<double> out;
  for (double x = lo[0]; x <= hi[0] * (1 + 1e-12); x *= 4) out.push_back(x);
  return out;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

std::string gaussian_string(GaussianInt z) {
  std::ostringstream os;
  os << z;
  return os.str();
}

// ---------------------------------------------------------------------------
// Flat key = value configuration.

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file: " + path);
  std::map<std::string, std::string> kv;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(line_no) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw UsageError("bad value for " + key + ": " + v);
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::round(d)) throw UsageError("bad integer for " + key + ": " + v);
  return static_cast<std::int64_t>(d);
}

void set_tolerance(gsk::Tolerances& tol, const std::string& key, const std::string& value) {
  const double v = to_double("tol." + key, value);
  if (!(v >= 0) || !tol.set(key, v)) throw UsageError("unknown tolerance or bad value: " + key + "=" + value);
}

// ---------------------------------------------------------------------------
// Commands.

struct VerifyArgs {
  std::string suite;
  std::optional<std::int64_t> max_norm, trials, triples, workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, format, config;
  std::vector<std::string> tol;
};

void write_text(const std::string& text, const std::optional<std::string>& path) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output path: " + *path);
  out << text;
  if (!out) throw std::runtime_error("cannot write output path: " + *path);
}

int run_verify(const VerifyArgs& a) {
  gsk::SuiteOptions o;
  std::string format = "json";
  std::optional<std::string> out;
  if (a.config) {
    for (const auto& [k, v] : read_config(*a.config)) {
      if (k == "seed") o.seed = static_cast<std::uint64_t>(to_int(k, v));
      else if (k == "max_norm" || k == "max-norm") o.max_norm = static_cast<int>(to_int(k, v));
      else if (k == "trials") o.trials = static_cast<int>(to_int(k, v));
      else if (k == "triples") o.triples = static_cast<int>(to_int(k, v));
      else if (k == "workers") o.workers = static_cast<unsigned>(to_int(k, v));
      else if (k == "format") format = v;
      else if (k == "out") out = v;
      else if (k == "nu") o.nu_grid = parse_list(v);
      else if (k == "X") o.X_grid = parse_X_grid(v);
      else if (k.rfind("tol.", 0) == 0) set_tolerance(o.tol, k.substr(4), v);
      else throw UsageError("unknown config key: " + k);
    }
  }
  if (a.seed) o.seed = *a.seed;
  if (a.max_norm) o.max_norm = static_cast<int>(*a.max_norm);
  if (a.trials) o.trials = static_cast<int>(*a.trials);
  if (a.triples) o.triples = static_cast<int>(*a.triples);
  if (a.workers) o.workers = static_cast<unsigned>(*a.workers);
  if (a.format) format = *a.format;
  if (a.out) out = a.out;
  for (const auto& kv : a.tol) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects key=value: " + kv);
    set_tolerance(o.tol, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (format != "json" && format != "csv") throw UsageError("unknown format: " + format);
  if (o.max_norm < 1 || o.trials < 1 || o.triples < 1 || o.workers < 1)
    throw UsageError("max-norm, trials, triples and workers must be positive");

  const auto doc = gsk::run_suite(a.suite, o);
  const std::string text = gsk::render(doc, format);
  write_text(text, out);
  int failures = 0;
  for (const auto& c : doc.checks)
    if (!c.pass) {
      std::cerr << "FAIL " << c.name << " (defect " << c.defect << ", tolerance " << c.tolerance << ")\n";
      ++failures;
    }
  return failures ? kExitFail : 0;
}

struct ScanArgs {
  std::string suite;
  std::string nu = "0.05,0.1,0.2,0.3,0.5";
  std::string X = "4..4096";
  std::string Q = "2,5,10,20,30";
  std::string Z = "16,64,256";
  double N = 20;
  std::optional<std::string> out, format;
};

int run_scan(const ScanArgs& a) {
  const std::string format = a.format.value_or("json");
  if (format != "json" && format != "csv") throw UsageError("unknown format: " + format);
  std::vector<std::string> columns;
  json rows = json::array();
  json summary = json::object();
  if (a.suite == "ktransform") {
    const auto table = gsk::bound_profile(parse_list(a.nu), parse_X_grid(a.X));
    columns = {"nu", "X", "k_value", "normaliser", "ratio"};
    for (const auto& c : table.cells) rows.push_back({{"nu", c.nu}, {"X", c.X}, {"k_value", c.k_value}, {"normaliser", c.normaliser}, {"ratio", c.ratio}});
    summary = {{"r_min", table.r_min}, {"r_max", table.r_max}, {"spread", table.r_max / table.r_min}};
  } else if (a.suite == "sieve") {
    columns = {"Q", "points", "lhs", "rhs", "ratio", "spacing_violations"};
    gsk::CoefficientVector c;
    for (const auto& n : gsk::annulus(0.0, a.N)) c.add(n, 1.0);
    for (double Q : parse_list(a.Q)) {
      const auto r = gsk::special_sieve_check(Q, 1, c, a.N);
      const auto s = gsk::farey_spacing_exact(static_cast<std::int64_t>(Q), 1);
      rows.push_back({{"Q", Q}, {"points", r.points}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"ratio", r.ratio}, {"spacing_violations", s.violations}});
    }
  } else if (a.suite == "poisson") {
    columns = {"Z", "s", "nearest_distance", "dual_sum", "normalized"};
    for (double Z : parse_list(a.Z)) {
      const auto f = gsk::annular_function(Z);
      const auto prm = gsk::annular_params(Z);
      const gsk::RadialFourier ft(f, 12.0);
      for (double s : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}) {
        const Complex tau = s * Complex(1, 1) / std::sqrt(2.0);
        const double n = gsk::nearest_distance(tau);
        const double sum = gsk::absolute_dual_sum(ft, tau);
        rows.push_back({{"Z", Z}, {"s", s}, {"nearest_distance", n}, {"dual_sum", sum},
                        {"normalized", sum / (std::pow(prm.Delta * prm.Omega1 * n * n, -2) * prm.Omega1)}});
      }
    }
  } else {
    throw UsageError("no scan defined for suite: " + a.suite + " (use ktransform, sieve or poisson)");
  }
  std::string text;
  if (format == "json") {
    json doc = {{"suite", a.suite}, {"rows", rows}};
    if (!summary.empty()) doc["summary"] = summary;
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << std::setprecision(17);
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << r[columns[i]].dump();
      os << '\n';
    }
    text = os.str();
  }
  write_text(text, a.out);
  return 0;
}

struct EvalArgs {
  std::string what;
  std::string u = "1", v = "1", w = "1";
  std::string q = "1", b = "0", h = "0", k = "0";
  std::string m = "1", n = "1";
  std::string nu = "0.1";
  int p = 0;
  double X = 16;
  bool quad = false;
};

int run_eval(const EvalArgs& a) {
  json out;
  out["op"] = a.what;
  if (a.what == "kloosterman") {
    const GaussianInt u = parse_gaussian(a.u), v = parse_gaussian(a.v), w = parse_gaussian(a.w);
    const auto r = gsk::kloosterman(u, v, w);
    out["u"] = gaussian_string(u);
    out["v"] = gaussian_string(v);
    out["w"] = gaussian_string(w);
    out["value"] = complex_json(r.value);
    out["terms"] = r.term_count;
  } else if (a.what == "ramanujan") {
    const GaussianInt q = parse_gaussian(a.q), b = parse_gaussian(a.b), h = parse_gaussian(a.h), k = parse_gaussian(a.k);
    const Complex brute = gsk::ramanujan_c(q, b, h, k), closed = gsk::ramanujan_c_closed(q, b, h, k);
    out["q"] = gaussian_string(q);
    out["b"] = gaussian_string(b);
    out["h"] = gaussian_string(h);
    out["k"] = gaussian_string(k);
    out["value"] = complex_json(brute);
    out["closed_form"] = complex_json(closed);
    out["defect"] = std::abs(brute - closed);
  } else if (a.what == "ktransform") {
    const Complex nu = parse_complex(a.nu);
    const auto phi = gsk::test_function_FX(a.X);
    const auto s = gsk::k_transform_series(phi, {nu, a.p});
    out["nu"] = complex_json(nu);
    out["p"] = a.p;
    out["X"] = a.X;
    out["value"] = complex_json(s.value);
    out["terms"] = s.truncation_terms;
    out["est_error"] = s.est_error;
    if (a.quad) {
      const auto q = gsk::k_transform_quad(phi, {nu, a.p});
      out["quadrature"] = complex_json(q.value);
      out["quadrature_error"] = q.est_error;
    }
  } else if (a.what == "level-sum") {
    const GaussianInt m = parse_gaussian(a.m), n = parse_gaussian(a.n), q = parse_gaussian(a.q);
    const auto r = gsk::level_sum(m, n, q, gsk::test_function_FX(a.X));
    out["m"] = gaussian_string(m);
    out["n"] = gaussian_string(n);
    out["q"] = gaussian_string(q);
    out["X"] = a.X;
    out["value"] = complex_json(r.value);
    out["visited"] = r.visited;
    out["c_norm_window"] = json::array({r.c_norm_lo, r.c_norm_hi});
  } else {
    throw UsageError("unknown evaluation: " + a.what);
  }
  std::cout << out.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-integer Kloosterman sums: verification suites, scans and evaluations"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run a verification suite and emit a report");
  verify->add_option("suite", va.suite, "suite name")->required()->check(CLI::IsMember(gsk::suite_names()));
  verify->add_option("--max-norm", va.max_norm, "Ramanujan closed form: all q with |q|^2 <= N");
  verify->add_option("--trials", va.trials, "large-sieve battery size");
  verify->add_option("--triples", va.triples, "Kloosterman structural battery size");
  verify->add_option("--seed", va.seed, "seed for every randomized instance");
  verify->add_option("--out", va.out, "report path (default: standard output)");
  verify->add_option("--format", va.format, "json or csv");
  verify->add_option("--workers", va.workers, "parallel checks");
  verify->add_option("--config", va.config, "flat key = value configuration file");
  verify->add_option("--tol", va.tol, "tolerance override key=value (repeatable)");

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "parameter scan of one suite");
  scan->add_option("suite", sa.suite, "ktransform, sieve or poisson")->required();
  scan->add_option("--nu", sa.nu, "ktransform: comma list of real orders");
  scan->add_option("--X", sa.X, "ktransform: comma list or a..b (factor-4 steps)");
  scan->add_option("--Q", sa.Q, "sieve: comma list of Q");
  scan->add_option("--N", sa.N, "sieve: coefficient range |n|^2 <= N");
  scan->add_option("--Z", sa.Z, "poisson: comma list of annulus scales");
  scan->add_option("--out", sa.out, "output path (default: standard output)");
  scan->add_option("--format", sa.format, "json or csv");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "single evaluation printed as one JSON object");
  eval->set_help_flag("--help", "print this help message and exit");  // -h is taken by --h
  eval->add_option("what", ea.what, "kloosterman, ramanujan, ktransform or level-sum")
      ->required()
      ->check(CLI::IsMember({"kloosterman", "ramanujan", "ktransform", "level-sum"}));
  eval->add_option("--u", ea.u, "kloosterman: u");
  eval->add_option("--v", ea.v, "kloosterman: v");
  eval->add_option("--w", ea.w, "kloosterman: modulus w");
  eval->add_option("--q", ea.q, "ramanujan, level-sum: modulus q");
  eval->add_option("--b", ea.b, "ramanujan: b");
  eval->add_option("--h", ea.h, "ramanujan: h");
  eval->add_option("--k", ea.k, "ramanujan: k");
  eval->add_option("--m", ea.m, "level-sum: m");
  eval->add_option("--n", ea.n, "level-sum: n");
  eval->add_option("--nu", ea.nu, "ktransform: spectral parameter");
  eval->add_option("--p", ea.p, "ktransform: integer p");
  eval->add_option("--X", ea.X, "ktransform, level-sum: F_X scale (>= 2)");
  eval->add_flag("--quad", ea.quad, "ktransform: add the quadrature value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*verify) return run_verify(va);
    if (*scan) return run_scan(sa);
    return run_eval(ea);
  } catch (const UsageError& e) {
    std::cerr << "gsk: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "gsk: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "gsk: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "gsk: " << e.what() << "\n";
    return kExitUsage;
  }
}
