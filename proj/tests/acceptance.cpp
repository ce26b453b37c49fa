// Acceptance run: one PASS/FAIL line per criterion. A criterion passes when every
// check it selects passes and the group finishes within its runtime budget.
// Exit status is 0 unless --strict is given, so ctest records the run while the
// lines themselves carry the verdicts.

#include <chrono>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "gsk/suites.hpp"

namespace {

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<bool(const std::string&)> selects;
};

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

bool any_of(const std::string& s, std::initializer_list<const char*> names) {
  for (const char* n : names)
    if (s == n) return true;
  return false;
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c{
      {1, "Ramanujan closed form vs brute force (|q|^2 <= 40) and S(k,0;q) closed form", 60,
       [](const std::string& n) { return starts_with(n, "ramanujan."); }},
      {2, "Kloosterman structural identities over 2000 seeded triples", 30,
       [](const std::string& n) {
         return any_of(n, {"kloosterman.symmetry", "kloosterman.reality", "kloosterman.unit_modulus",
                           "kloosterman.periodicity", "kloosterman.shift"});
       }},
      {3, "Moebius divisor sum, residue counts, Gamma_0 index, prime counts", 30,
       [](const std::string& n) {
         return any_of(n, {"moebius.divisor_sum", "residues.count", "index_gamma0.projective_line", "prime_count.examples"});
       }},
      {4, "Poisson summation battery and Gaussian self-duality", 60,
       [](const std::string& n) { return starts_with(n, "poisson.") || n == "fourier.gaussian_self_dual"; }},
      {5, "K-transform series vs quadrature, symmetry, derivative identity", 120,
       [](const std::string& n) {
         return starts_with(n, "ktransform.series_vs_quad.") || n == "ktransform.symmetry" ||
                n == "mtransform.derivative_identity";
       }},
      {6, "Growth profiles: real-order sandwich and imaginary-order decay shape", 120,
       [](const std::string& n) { return starts_with(n, "profile."); }},
      {7, "Large sieve batteries and exact Farey spacing", 60,
       [](const std::string& n) { return starts_with(n, "sieve."); }},
      {8, "Aggregates: R evaluation orders, Lambda vs triple loop, level-sum window", 60,
       [](const std::string& n) {
         return n == "aggregates.r_sum.two_orders.reference_2_4_4_8_16" || starts_with(n, "aggregates.lambda.triple_loop.") ||
                n == "aggregates.level_sum.window";
       }},
      {9, "Weight constructions: plateau and twisted-radial derivative shape", 30,
       [](const std::string& n) { return starts_with(n, "weights."); }},
  };
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  std::string report_path;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
      report_path = argv[++i];
    } else {
      std::cerr << "usage: acceptance [--strict] [--out report.json]\n";
      return 2;
    }
  }

  const gsk::SuiteOptions opts;
  const auto all = gsk::suite_tasks("all", opts);
  gsk::ReportDocument doc;
  doc.suite = "acceptance";
  doc.seed = opts.seed;
  int failed = 0;
  std::cout << std::fixed << std::setprecision(1);
  for (const auto& cr : criteria()) {
    std::vector<gsk::CheckTask> picked;
    for (const auto& t : all)
      if (cr.selects(t.name)) picked.push_back(t);
    const auto t0 = std::chrono::steady_clock::now();
    const auto checks = gsk::run_tasks(picked, 1);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = !checks.empty() && secs <= cr.budget_seconds;
    for (const auto& c : checks) pass = pass && c.pass;
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << cr.id << ": " << cr.title << " [" << checks.size()
              << " checks, " << secs << " s of " << cr.budget_seconds << " s]\n";
    for (const auto& c : checks)
      if (!c.pass)
        std::cout << "     failing check " << c.name << ": defect " << std::scientific << std::setprecision(4) << c.defect
                  << " > tolerance " << c.tolerance << std::fixed << std::setprecision(1) << "\n";
    if (secs > cr.budget_seconds) std::cout << "     over runtime budget\n";
    std::cout.flush();
    doc.checks.insert(doc.checks.end(), checks.begin(), checks.end());
  }
  std::cout << (9 - failed) << "/9 criteria pass\n";
  if (!report_path.empty()) {
    doc.sort();
    try {
      gsk::emit_report(doc, report_path, "json");
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }
  }
  return strict && failed ? 1 : 0;
}
