#pragma once
// Verification suites shared by the CLI and the acceptance binary. Each suite is
// a list of named checks; run_suite executes them on a worker pool and returns
// the rows ordered by name.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gsk/aggregates.hpp"
#include "gsk/char_sums.hpp"
#include "gsk/fourier_poisson.hpp"
#include "gsk/large_sieve.hpp"
#include "gsk/oracles.hpp"
#include "gsk/report.hpp"
#include "gsk/smooth_weights.hpp"
#include "gsk/spectral_transform.hpp"
#include "gsk/zi_core.hpp"

namespace gsk {

/// Every tolerance used by the suites, with its default.
struct Tolerances {
  double exact = 1e-9;           // exact identities evaluated in floating point
  double ramanujan = 1e-8;       // closed form vs brute force, per unit |q|^2
  double quadrature = 1e-6;      // quadrature-limited identities
  double cross = 1e-5;           // series vs quadrature; finite-difference Laplacian
  double derivative = 1e-7;      // M-transform derivative identity
  double symmetry = 1e-10;       // K-transform symmetry
  double profile_spread = 100;   // max/min of normalized profiles
  double decay_factor = 10;      // decay-law constant relative to w = 0
  double trivial_ratio = 10;     // |R| against its trivial bound
  double aggregate_order = 1e-9; // two evaluation orders, relative

  /// Sets a tolerance by key; false if the key is unknown.
  bool set(const std::string& key, double v) {
    for (auto& [k, p] : table())
      if (k == key) {
        this->*p = v;
        return true;
      }
    return false;
  }
  static const std::vector<std::pair<std::string, double Tolerances::*>>& table() {
    static const std::vector<std::pair<std::string, double Tolerances::*>> t{
        {"exact", &Tolerances::exact},
        {"ramanujan", &Tolerances::ramanujan},
        {"quadrature", &Tolerances::quadrature},
        {"cross", &Tolerances::cross},
        {"derivative", &Tolerances::derivative},
        {"symmetry", &Tolerances::symmetry},
        {"profile_spread", &Tolerances::profile_spread},
        {"decay_factor", &Tolerances::decay_factor},
        {"trivial_ratio", &Tolerances::trivial_ratio},
        {"aggregate_order", &Tolerances::aggregate_order}};
    return t;
  }
};

struct SuiteOptions {
  std::uint64_t seed = 42;
  int max_norm = 40;     // Ramanujan closed form: every q with |q|^2 <= max_norm
  int trials = 500;      // large-sieve battery size
  int triples = 2000;    // Kloosterman structural battery size
  unsigned workers = 1;
  Tolerances tol;
  std::vector<double> nu_grid{0.05, 0.1, 0.2, 0.3, 0.5};
  std::vector<double> X_grid{4, 16, 64, 256, 1024, 4096};
};

struct CheckTask {
  std::string name;
  std::string paper_ref;
  std::function<Check()> run;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "poisson", "sieve", "ktransform", "aggregates", "all"};
  return names;
}

namespace detail {

inline Check make_check(double lhs, double rhs, double defect, double tolerance) {
  Check c;
  c.lhs = lhs;
  c.rhs = rhs;
  c.defect = defect;
  c.tolerance = tolerance;
  c.pass = std::isfinite(defect) && defect <= tolerance;
  return c;
}

/// Largest |a - b| / scale seen, with the pair that produced it.
struct Worst {
  double defect = 0, lhs = 0, rhs = 0;
  std::size_t count = 0;
  void see(Complex a, Complex b, double scale = 1) {
    ++count;
    const double d = std::abs(a - b) / scale;
    if (d > defect || !std::isfinite(d)) {
      defect = std::isfinite(d) ? d : std::numeric_limits<double>::infinity();
      lhs = std::abs(a);
      rhs = std::abs(b);
    }
  }
  Check check(double tol) const {
    Check c = make_check(lhs, rhs, defect, tol);
    c.detail["cases"] = count;
    return c;
  }
};

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq s{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                  static_cast<std::uint32_t>(salt)};
  std::uint64_t out;
  s.generate(reinterpret_cast<std::uint32_t*>(&out), reinterpret_cast<std::uint32_t*>(&out) + 2);
  return out;
}

inline std::string tau_label(Complex t) {
  std::ostringstream os;
  os << t.real() << (t.imag() < 0 ? "" : "+") << t.imag() << "i";
  return os.str();
}

// ---------------------------------------------------------------------------
// identities

inline std::vector<CheckTask> identity_tasks(const SuiteOptions& o) {
  std::vector<CheckTask> t;
  const Tolerances tol = o.tol;

  t.push_back({"ramanujan.closed_form", "Lemma 5.7, Eq. (5.32)/(5.34), \"implicit in the last summation\" vs Eq. (5.31)", [o, tol] {
                 Worst w;
                 std::size_t moduli = 0;
                 for (const auto& q : annulus(0.0, o.max_norm)) {
                   ++moduli;
                   const auto res = residues_mod(q);
                   const double nq = double(norm(q));
                   for (const auto& b : res)
                     for (const auto& h : res)
                       for (const auto& k : res) w.see(ramanujan_c_closed(q, b, h, k), ramanujan_c(q, b, h, k), nq);
                 }
                 Check c = w.check(tol.ramanujan);
                 c.detail["moduli"] = moduli;
                 c.detail["max_norm"] = o.max_norm;
                 return c;
               }});

  t.push_back({"ramanujan.degenerate", "Eq. (5.35), \"One has, in particular\"", [o, tol] {
                 Worst w;
                 std::vector<GaussianInt> ks{0};
                 for (const auto& k : annulus(0.0, 8.0))
                   if (ks.size() < 20) ks.push_back(k);
                 for (const auto& q : annulus(0.0, 1.5 * o.max_norm))
                   for (const auto& k : ks)
                     w.see(kloosterman(k, 0, q).value, kloosterman_degenerate_closed(q, k), double(norm(q)));
                 return w.check(tol.exact);
               }});

  // Kloosterman structural identities over seeded random triples.
  struct Triple {
    GaussianInt u, v, w, s, p;
  };
  auto triples = [o](std::uint64_t salt) {
    std::mt19937_64 rng(mix(o.seed, salt));
    const auto mods = annulus(0.0, 100.0);
    std::uniform_int_distribution<int> coord(-30, 30);
    std::uniform_int_distribution<std::size_t> pick(0, mods.size() - 1);
    std::vector<Triple> out;
    while (out.size() < static_cast<std::size_t>(o.triples)) {
      Triple x{{coord(rng), coord(rng)}, {coord(rng), coord(rng)}, mods[pick(rng)], {coord(rng), coord(rng)},
               mods[pick(rng)]};
      out.push_back(x);
    }
    return out;
  };
  const std::string ks = "Eq. (1.3.6), \"the `simple Kloosterman sum'\"";
  t.push_back({"kloosterman.symmetry", ks + ": S(u,v;w) = S(v,u;w)", [=] {
                 Worst w;
                 for (const auto& x : triples(1)) w.see(kloosterman(x.u, x.v, x.w).value, kloosterman(x.v, x.u, x.w).value);
                 return w.check(tol.exact);
               }});
  t.push_back({"kloosterman.reality", ks + ": Im S(u,v;w) = 0", [=] {
                 Worst w;
                 for (const auto& x : triples(2)) {
                   const Complex s = kloosterman(x.u, x.v, x.w).value;
                   w.see(s, s.real());
                 }
                 return w.check(tol.exact);
               }});
  t.push_back({"kloosterman.unit_modulus", ks + ": S(u,v;-w) = S(u,v;w), S(u,v;iw) = S(-u,v;w)", [=] {
                 Worst w;
                 for (const auto& x : triples(3)) {
                   w.see(kloosterman(x.u, x.v, -x.w).value, kloosterman(x.u, x.v, x.w).value);
                   w.see(kloosterman(x.u, x.v, kI * x.w).value, kloosterman(-x.u, x.v, x.w).value);
                 }
                 return w.check(tol.exact);
               }});
  t.push_back({"kloosterman.periodicity", ks + ": S(u+ws,v+wt;w) = S(u,v;w)", [=] {
                 Worst w;
                 for (const auto& x : triples(4))
                   w.see(kloosterman(x.u + x.w * x.s, x.v - x.w * x.p, x.w).value, kloosterman(x.u, x.v, x.w).value);
                 return w.check(tol.exact);
               }});
  t.push_back({"kloosterman.shift", "Lemma 6.2 proof, \"an immediate consequence of the definition\"", [=] {
                 Worst w;
                 for (const auto& x : triples(5)) {
                   // a = w with |a|^2 <= 100; p is s, s + 1 or 1, whichever is first coprime to a.
                   GaussianInt p = 1;
                   for (const GaussianInt c : {x.s, x.s + GaussianInt{1}})
                     if (!is_zero(c) && coprime(c, x.w)) {
                       p = c;
                       break;
                     }
                   const GaussianInt ps = inv_mod(p, x.w);
                   w.see(kloosterman(x.u * ps, x.v, x.w).value, kloosterman(x.u, x.v * ps, x.w).value);
                 }
                 return w.check(tol.exact);
               }});
  t.push_back({"kloosterman.oracle", ks + ": exact-phase sum vs search oracle", [=] {
                 std::mt19937_64 rng(mix(o.seed, 6));
                 const auto mods = annulus(0.0, 50.0);
                 std::uniform_int_distribution<int> coord(-20, 20);
                 std::uniform_int_distribution<std::size_t> pick(0, mods.size() - 1);
                 Worst w;
                 for (int i = 0; i < 200; ++i) {
                   const GaussianInt m = mods[pick(rng)], u{coord(rng), coord(rng)}, v{coord(rng), coord(rng)};
                   w.see(kloosterman(u, v, m).value, oracle::kloosterman(u, v, m));
                 }
                 return w.check(tol.exact);
               }});

  t.push_back({"moebius.divisor_sum", "Eq. (5.6), \"A useful property of this function\"", [] {
                 Worst w;
                 for (const auto& n : annulus(0.0, 2000.0)) {
                   int s = 0;
                   for (const auto& d : divisors(n, true)) s += moebius(d);
                   w.see(double(s), is_unit(n) ? 1.0 : 0.0);
                 }
                 return w.check(0.0);
               }});
  t.push_back({"residues.count", "Eq. (5.9), \"additive group O/mO has order\"", [] {
                 Worst w;
                 for (const auto& m : annulus(0.0, 200.0)) w.see(double(residues_mod(m).size()), double(norm(m)));
                 return w.check(0.0);
               }});
  t.push_back({"index_gamma0.projective_line", "Eq. (7.39), \"only one factor, not four, per prime ideal\"", [] {
                 Worst w;
                 for (const auto& r : annulus(0.0, 25.0))
                   w.see(double(index_gamma0(r)), double(oracle::projective_line_count(r)));
                 return w.check(0.0);
               }});
  t.push_back({"prime_count.examples", "Eq. (7.35), \"signifying a `Gaussian prime'\"", [] {
                 Worst w;
                 w.see(double(gaussian_prime_count(2)), 4.0);
                 w.see(double(gaussian_prime_count(9)), 12.0);
                 return w.check(0.0);
               }});
  return t;
}

// ---------------------------------------------------------------------------
// poisson

struct PoissonCase {
  std::string label;
  std::function<SmoothComplexFunction()> make;
  double cutoff;
};

inline const std::vector<PoissonCase>& poisson_battery() {
  static const std::vector<PoissonCase> b{
      {"gaussian", [] { return gaussian(); }, 6.0},
      {"bump_R3", [] { return radial_bump(3.0); }, 15.0},
      {"log_ring", [] { return log_radial_bump(1.5, -1 - 1.5 * std::log(36.0)); }, 22.0}};
  return b;
}

inline const std::vector<Complex>& poisson_taus() {
  static const std::vector<Complex> t{0.0, Complex(0.3, 0.7), Complex(0.49, 0.49), Complex(1.1, -0.2)};
  return t;
}

inline std::vector<CheckTask> poisson_tasks(const SuiteOptions& o) {
  std::vector<CheckTask> t;
  const Tolerances tol = o.tol;
  t.push_back({"fourier.gaussian_self_dual", "Eq. (5.3), \"we define the Fourier transform\"", [tol] {
                 Worst w;
                 const auto g = gaussian();
                 for (int k = 0; k < 10; ++k) {
                   const Complex f(0.23 * k - 0.4, 0.17 * k * (k % 2 ? -1 : 1));
                   w.see(fourier_c(g, f).value, std::exp(-std::numbers::pi * std::norm(f)));
                 }
                 return w.check(tol.quadrature);
               }});
  for (const auto& pc : poisson_battery())
    for (const Complex tau : poisson_taus())
      t.push_back({"poisson." + pc.label + ".tau=" + tau_label(tau), "Eq. (5.23), \"Poisson Summation over Rn and over C\"",
                   [pc, tau, tol] {
                     const auto r = poisson_check(pc.make(), tau, pc.cutoff);
                     Check c = make_check(std::abs(r.lhs), std::abs(r.rhs), r.defect, tol.quadrature);
                     c.detail["cutoff"] = pc.cutoff;
                     c.detail["tail_estimate"] = r.tail_estimate;
                     c.detail["lhs_terms"] = r.lhs_terms;
                     c.detail["rhs_terms"] = r.rhs_terms;
                     return c;
                   }});
  t.push_back({"fourier.inversion", "Lemma 5.1, (5.11), \"Fourier's Inversion Formulae\"", [tol] {
                 Worst w;
                 for (auto [f, rho] : {std::pair{gaussian(), 8.0}, std::pair{radial_bump(1.0), 70.0}}) {
                   const RadialFourier back(radial_transform(f, rho), 1.0);
                   for (double r : {0.0, 0.15, 0.4, 0.63, 0.9}) w.see(back(r), f.radial(r));
                 }
                 return w.check(tol.quadrature);
               }});
  t.push_back({"laplacian.gaussian", "Lemma 5.2, Eq. (5.13), \"that are related to one another by\"", [tol] {
                 Worst w;
                 const auto at0 = laplacian_transform_check(gaussian(), 0.0);
                 w.see(at0.lhs, at0.rhs);
                 const auto at1 = laplacian_transform_check(gaussian(), 1.0);
                 w.see(at1.lhs, at1.rhs);
                 return w.check(tol.quadrature);
               }});
  t.push_back({"laplacian.bump_finite_difference", "Lemma 5.2, Eq. (5.13), \"that are related to one another by\"", [tol] {
                 auto f = radial_bump(1.0);
                 f.laplacian_eval = nullptr;
                 const auto r = laplacian_transform_check(f, Complex(2, 1));
                 return make_check(std::abs(r.lhs), std::abs(r.rhs), r.defect, tol.cross);
               }});
  t.push_back({"dual_expansion.small_annulus", "Lemma 5.6, Eq. (5.30), \"and B>0, one has moreover\"", [tol] {
                 const auto r = dual_expansion_check(annular_function(6.0), 1, 1, 0, {1, 1}, 100.0, annular_params(6.0));
                 Check c = make_check(std::abs(r.direct), std::abs(r.expansion), r.defect, tol.quadrature);
                 c.detail["retained"] = r.retained;
                 c.detail["surviving"] = r.surviving;
                 return c;
               }});
  t.push_back({"dual_expansion.structural_zeros", "Lemma 5.6, Eq. (5.30) with Eq. (5.32), \"=0 if (b,q)≁(h,q)\"", [tol] {
                 const auto r = dual_expansion_check(annular_function(10.0), 1, 3, {1, 1}, 3, 1e6, annular_params(10.0));
                 Check c = make_check(std::abs(r.direct), std::abs(r.expansion), r.defect / (1 + std::abs(r.direct)), tol.exact);
                 c.pass = c.pass && r.surviving == 1 && r.retained == 9;
                 c.detail["retained"] = r.retained;
                 c.detail["surviving"] = r.surviving;
                 return c;
               }});
  t.push_back({"fourier.decay_law", "Lemma 5.4, (5.26), \"Suppose moreover that, for all\"", [tol] {
                 double worst = 0, at0 = 0;
                 for (double Z : {4.0}) {
                   const auto f = annular_function(Z);
                   const auto prm = annular_params(Z);
                   const RadialFourier ft(f, 40.0);
                   auto m = [&](double w) {
                     return std::abs(ft(w)) * std::pow(1 + prm.Delta * prm.Omega1 * w * w / prm.C, 2) / (prm.C * prm.Omega1);
                   };
                   const double base = m(0);
                   for (double w = 0.1; w <= 40.0; w += 0.1) {
                     if (m(w) / base > worst) {
                       worst = m(w) / base;
                       at0 = base;
                     }
                   }
                 }
                 return make_check(worst * at0, at0, worst, tol.decay_factor);
               }});
  t.push_back({"fourier.tail_shape", "Lemma 5.5, (5.27), \"distance to the nearest Gaussian integer\"", [] {
                 const double Z = 256.0;
                 const auto f = annular_function(Z);
                 const auto prm = annular_params(Z);
                 const RadialFourier ft(f, 12.0);
                 std::vector<double> sums, ratios;
                 for (double s : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}) {
                   const Complex tau = s * Complex(1, 1) / std::sqrt(2.0);
                   const double n = nearest_distance(tau);
                   sums.push_back(absolute_dual_sum(ft, tau));
                   ratios.push_back(sums.back() / (std::pow(prm.Delta * prm.Omega1 * n * n, -2) * prm.Omega1));
                 }
                 const double worst = *std::max_element(ratios.begin(), ratios.end());
                 Check c = make_check(worst, 1.0, worst, 1.0);
                 c.detail["sums"] = sums;
                 c.detail["normalized"] = ratios;
                 c.detail["monotone"] = std::is_sorted(sums.rbegin(), sums.rend());
                 return c;
               }});
  t.push_back({"nearest_distance.examples", "Eq. (5.7), \"The Distance to the Nearest Gaussian Integer\"", [] {
                 Worst w;
                 w.see(nearest_distance(Complex(1, 1)), 0.0);
                 w.see(nearest_distance(Complex(0.5, 0.5)), 1 / std::sqrt(2.0));
                 w.see(nearest_distance(0.3), 0.3);
                 return w.check(1e-15);
               }});
  return t;
}

// ---------------------------------------------------------------------------
// sieve

inline Check battery_check(const SieveBattery& b) {
  Check c = make_check(b.max_ratio, 1.0, double(b.violations), 0.0);
  c.pass = c.pass && b.max_ratio <= 1.0;
  c.detail["trials"] = b.trials;
  c.detail["violations"] = b.violations;
  c.detail["max_ratio"] = b.max_ratio;
  c.detail["mean_ratio"] = b.mean_ratio;
  return c;
}

inline std::vector<CheckTask> sieve_tasks(const SuiteOptions& o) {
  std::vector<CheckTask> t;
  t.push_back({"sieve.general", "Eq. (5.39), \"16 M(δ,R)(2N+δ⁻¹)\" bound of Lemma 5.8", [o] {
                 return battery_check(general_sieve_battery(o.trials, mix(o.seed, 11)));
               }});
  t.push_back({"sieve.special", "Eq. (5.48), \"64(2N + Q²/|d|²)\" bound of Lemma 5.9", [o] {
                 return battery_check(special_sieve_battery(o.trials, mix(o.seed, 12)));
               }});
  t.push_back({"sieve.farey_spacing", "Eq. (5.49) chain, Lemma 5.9, \"(a special analytic large sieve\"", [] {
                 std::size_t pairs = 0, violations = 0, mult = 0;
                 for (const GaussianInt d : {GaussianInt{1}, GaussianInt{1, 1}, GaussianInt{2}}) {
                   const auto s = farey_spacing_exact(30, d);
                   pairs += s.pairs;
                   violations += s.violations;
                   mult = std::max(mult, s.max_multiplicity);
                 }
                 Check c = make_check(double(violations), 0.0, double(violations), 0.0);
                 c.detail["pairs"] = pairs;
                 c.detail["max_multiplicity"] = mult;
                 return c;
               }});
  return t;
}

// ---------------------------------------------------------------------------
// ktransform (with the weight constructions it consumes)

inline double rel_defect(Complex a, Complex b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

inline std::vector<CheckTask> ktransform_tasks(const SuiteOptions& o) {
  std::vector<CheckTask> t;
  const Tolerances tol = o.tol;
  const std::vector<SpectralPoint> grid{{0.1, 0}, {0.2, 0}, {Complex(0, 1), 0}, {Complex(0, 2), 1}, {Complex(0, 1), 2}};
  for (const auto& pt : grid) {
    std::ostringstream name;
    name << "ktransform.series_vs_quad.nu=" << tau_label(pt.nu) << ".p=" << pt.p;
    t.push_back({name.str(), "Lemma 2.1, Eq. (2.5)–(2.6), \"continuous, and compactly supported\" vs Eq. (1.2.2), \"defines the K-transform by\"", [pt, tol] {
                   const auto phi = test_function_FX(16);
                   const auto s = k_transform_series(phi, pt);
                   const auto q = k_transform_quad(phi, pt);
                   Check c = make_check(std::abs(s.value), std::abs(q.value), rel_defect(s.value, q.value), tol.cross);
                   c.detail["series_terms"] = s.truncation_terms;
                   c.detail["series_error"] = s.est_error;
                   c.detail["quad_error"] = q.est_error;
                   return c;
                 }});
  }
  t.push_back({"ktransform.symmetry", "Eq. (2.4), Kf(ν,p) = Kf(−ν,|p|) = Kf(ν,|p|)", [tol] {
                 Worst w;
                 const auto phi = test_function_FX(16);
                 for (Complex nu : {Complex(0.1), Complex(0, 1), Complex(0.2, 0.7)})
                   for (int p : {0, 1, 2}) {
                     const Complex a = k_transform_series(phi, {nu, p}).value;
                     for (const SpectralPoint q : {SpectralPoint{-nu, p}, SpectralPoint{nu, -p}, SpectralPoint{-nu, -p}})
                       w.see(k_transform_series(phi, q).value, a, std::max(1.0, std::abs(a)));
                   }
                 return w.check(tol.symmetry);
               }});
  t.push_back({"mtransform.derivative_identity", "Eq. (2.7), \"has a continuous derivative\"", [tol] {
                 Worst w;
                 for (const auto& phi : {test_function_FX(16), annular_weight(3.0)})
                   for (Complex s : {Complex(0.5), Complex(1.0), Complex(1.5, 1.0)})
                     for (int j = 1; j <= 3; ++j) {
                       const Complex lhs = pochhammer(s, j) * m_transform(phi, s).value;
                       const Complex rhs = std::pow(-2.0, j) * m_transform_deriv(phi, j, s + double(j)).value;
                       w.see(lhs, rhs, std::max(1.0, std::abs(lhs)));
                     }
                 return w.check(tol.derivative);
               }});
  t.push_back({"profile.real_order", "Lemma 2.3 Eq. (2.32)/(2.34), \"Let the hypotheses of the previous lemma\"", [o, tol] {
                 const auto table = bound_profile(o.nu_grid, o.X_grid);
                 const double spread = table.r_min > 0 ? table.r_max / table.r_min : std::numeric_limits<double>::infinity();
                 bool increasing = true;
                 for (std::size_t i = 1; i < table.cells.size(); ++i)
                   if (table.cells[i].nu == table.cells[i - 1].nu)
                     increasing = increasing && table.cells[i].k_value > table.cells[i - 1].k_value;
                 Check c = make_check(table.r_max, table.r_min, spread, tol.profile_spread);
                 c.pass = c.pass && table.r_min > 0 && increasing;
                 c.detail["increasing_in_X"] = increasing;
                 c.detail["cells"] = table.cells.size();
                 return c;
               }});
  t.push_back({"profile.imaginary_order", "Outline (0.2), \"By Lemma 2.2 of this paper\"", [tol] {
                 const auto phi = test_function_FX(16);
                 std::vector<double> ts, vals;
                 for (double s = 1.0; s <= 8.0; s += 1.0) {
                   ts.push_back(s);
                   vals.push_back(std::pow(1.0 + s, 4) * std::abs(k_transform_series(phi, {Complex(0, s), 0}).value));
                 }
                 const double mx = *std::max_element(vals.begin(), vals.end());
                 const double mn = *std::min_element(vals.begin(), vals.end());
                 Check c = make_check(mx, mn, mn > 0 ? mx / mn : std::numeric_limits<double>::infinity(), tol.profile_spread);
                 c.detail["t"] = ts;
                 c.detail["normalized"] = vals;
                 return c;
               }});
  t.push_back({"weights.plateau_omega", "Lemma 9.5, Eq. (9.56)–(9.57), \"there exists an infinitely differentiable function\"", [] {
                 const auto om = plateau_omega(4.0);
                 double worst = 0;
                 std::size_t n = 0;
                 for (int k = 0; k < 1000; ++k) {
                   const double u = std::exp2(-8 + 16.0 * k / 999);
                   const double v = om(u);
                   ++n;
                   double d = std::max(0.0, -v) + std::max(0.0, v - 1);
                   if (u <= std::exp2(-6) || u >= std::exp2(6)) d = std::max(d, std::abs(v));
                   if (u >= std::exp2(-4) && u <= std::exp2(4)) d = std::max(d, std::abs(v - 1));
                   worst = std::max(worst, d);
                 }
                 Check c = make_check(worst, 0.0, worst, 1e-15);
                 c.detail["grid"] = n;
                 return c;
               }});
  t.push_back({"weights.twisted_radial_derivatives", "Lemma 9.4, Eq. (9.43)–(9.45), \"infinitely differentiable on (0,∞), satisfies\"", [] {
                 const double X = 16.0;
                 const auto om = plateau_omega(1.0);
                 double worst = 0;
                 for (int j = 1; j <= 3; ++j) {
                   std::vector<double> cj;
                   for (double tt : {0.0, 1.0, 5.0}) {
                     const auto phi = twisted_radial(om, X, tt);
                     double m = 0;
                     for (int k = 0; k < 400; ++k) {
                       const double r = phi.r_lo() * std::pow(phi.r_hi() / phi.r_lo(), k / 399.0);
                       m = std::max(m, std::pow(r, j) * std::abs(phi.deriv(j, r)));
                     }
                     cj.push_back(m / std::pow(1 + tt, j));
                   }
                   for (double v : cj) worst = std::max(worst, v / cj[0]);
                 }
                 return make_check(worst, 1.0, worst, 2.0);
               }});
  return t;
}

// ---------------------------------------------------------------------------
// aggregates

inline PointFn seeded_phases(std::uint64_t seed) {
  return [seed](GaussianInt z) {
    std::mt19937_64 rng(mix(seed, std::uint64_t(z.re + 100000) * 200003u + std::uint64_t(z.im + 100000)));
    return std::polar(1.0, std::uniform_real_distribution<double>(0, 2 * std::numbers::pi)(rng));
  };
}

inline RadialWeight bump_in_x(double P) {
  return RadialWeight::from_values(P / 2, P, [P](double x) { return Complex(bump_phi(4 * x / P - 3)); }, "bump(|p|^2)");
}

/// Lambda by a triple loop with r* found by search and Kloosterman sums from the oracle.
inline Complex lambda_oracle(const CuspSumSpec& spec) {
  auto box = [](double lo, double hi) {
    std::vector<GaussianInt> out;
    const auto r = static_cast<std::int64_t>(std::sqrt(hi)) + 1;
    for (std::int64_t x = -r; x <= r; ++x)
      for (std::int64_t y = -r; y <= r; ++y) {
        const double n = double(x * x + y * y);
        if (n > lo && n <= hi) out.push_back({x, y});
      }
    return out;
  };
  Complex sum = 0;
  for (const auto& r : box(spec.R / 2, spec.R))
    for (const auto& s : box(spec.S / 2, spec.S)) {
      if (oracle::gcd_norm_scan(r, s) != 1) continue;
      for (const auto& n : box(spec.N / 4, spec.N))
        for (const auto& l : box(spec.L / 2, spec.L))
          for (const auto& p : box(0, spec.P)) {
            if (oracle::gcd_norm_scan(p, r) != 1) continue;
            const GaussianInt m = p * s;
            GaussianInt rs{0};
            for (const auto& e : residues_mod(m))
              if (oracle::divides_fp(m, r * e - GaussianInt{1})) {
                rs = e;
                break;
              }
            sum += spec.b(r, s) * spec.a(n) * spec.A(l) * spec.g.eval(double(norm(p))) * oracle::kloosterman(rs * n, l, m);
          }
    }
  return sum;
}

inline std::vector<CheckTask> aggregate_tasks(const SuiteOptions& o) {
  std::vector<CheckTask> t;
  const Tolerances tol = o.tol;
  auto r_spec = [o](double H, double K, double L, double P, double Q) {
    AggregateSpec s;
    s.H = H, s.K = K, s.L = L, s.P = P, s.Q = Q, s.delta = 0.5;
    s.theta = seeded_phases(mix(o.seed, 21));
    s.phi_h = seeded_phases(mix(o.seed, 22));
    s.upsilon = seeded_phases(mix(o.seed, 23));
    return s;
  };
  for (auto [label, dims] : {std::pair{std::string("reference_2_4_4_8_16"), std::array<double, 5>{2, 4, 4, 8, 16}},
                             std::pair{std::string("nondegenerate_3_5_5_10_10"), std::array<double, 5>{3, 5, 5, 10, 10}}}) {
    const auto spec = r_spec(dims[0], dims[1], dims[2], dims[3], dims[4]);
    t.push_back({"aggregates.r_sum.two_orders." + label, "Eq. (6.1), \"the summation is over the points\"", [spec, tol] {
                   const auto r = r_sum(spec);
                   Check c = make_check(std::abs(r.value), std::abs(r.alternate), r.defect, tol.aggregate_order);
                   c.detail["terms"] = static_cast<std::uint64_t>(r.terms);
                   return c;
                 }});
    t.push_back({"aggregates.r_sum.trivial_bound." + label, "Eq. (6.7), \"essentially trivial, preliminary\" bound", [spec, tol] {
                   const auto r = r_sum(spec);
                   return make_check(std::abs(r.value), r.trivial, r.ratio, tol.trivial_ratio);
                 }});
  }
  auto lam = [](double RS, double N, double L, double P) {
    CuspSumSpec s;
    s.R = RS, s.S = RS, s.N = N, s.L = L, s.P = P;
    s.g = bump_in_x(P);
    return s;
  };
  for (double RS : {1.0, 2.0}) {
    const auto spec = lam(RS, 1, 1, 12);
    t.push_back({"aggregates.lambda.triple_loop.B(" + std::to_string(int(RS)) + "," + std::to_string(int(RS)) + ")",
                 "Eq. (1.4.10), \"Put Λ = ...\" with Eq. (1.4.11)", [spec, tol] {
                   const auto r = lambda_sum(spec);
                   const Complex ref = lambda_oracle(spec);
                   Check c = make_check(std::abs(r.value), std::abs(ref), std::abs(r.value - ref) / std::max(1.0, std::abs(ref)),
                                        tol.aggregate_order);
                   c.detail["pairs"] = enumerate_B(spec.R, spec.S).size();
                   c.detail["X"] = spec.X();
                   return c;
                 }});
  }
  {
    auto spec = lam(1, 1, 1, 12);
    spec.R = 5, spec.S = 2, spec.N = 16, spec.L = 9;
    spec.b = [](GaussianInt r, GaussianInt s) { return Complex(1.0 / double(norm(r)), double(s.re)); };
    spec.a = seeded_phases(mix(o.seed, 24));
    spec.A = seeded_phases(mix(o.seed, 25));
    t.push_back({"aggregates.lambda.two_orders", "Eq. (1.4.10), \"Put Λ = ...\" with Eq. (1.4.11)", [spec, tol] {
                   const auto r = lambda_sum(spec);
                   Check c = make_check(std::abs(r.value), std::abs(r.alternate), r.defect, tol.aggregate_order);
                   c.pass = c.pass && std::abs(r.value) <= r.trivial * (1 + 1e-12);
                   c.detail["terms"] = static_cast<std::uint64_t>(r.terms);
                   c.detail["envelope_ratio"] = r.ratio;
                   return c;
                 }});
  }
  t.push_back({"aggregates.K_rs.example", "Eq. (1.4.11), \"as described below (1.4.4)\"", [tol] {
                 const auto g = RadialWeight::from_values(1, 2, [](double) { return Complex(1.0); });
                 const Complex k = K_rs(1, 1, 1, 1, g);
                 return make_check(std::abs(k), 8.0, std::abs(k - 8.0), tol.exact);
               }});
  t.push_back({"aggregates.level_sum.window", "Outline Eq. (0.1)/(0.3); §1.3 Eq. (1.3.4)–(1.3.5), \"the choice (1.3.3) also ensures\"", [tol] {
                 const auto f = test_function_FX(16);
                 Worst w;
                 std::size_t visited = 0, window = 0;
                 for (const GaussianInt q : {GaussianInt{1}, GaussianInt{1, 1}, GaussianInt{2, 1}}) {
                   const auto r = level_sum(1, 1, q, f);
                   visited += r.visited;
                   Complex expect = 0;
                   const auto reach = static_cast<std::int64_t>(std::sqrt(1.5 * r.c_norm_hi)) + 1;
                   for (std::int64_t x = -reach; x <= reach; ++x)
                     for (std::int64_t y = -reach; y <= reach; ++y) {
                       const GaussianInt c{x, y};
                       if (is_zero(c) || !divides(q, c) || double(norm(c)) > 1.5 * r.c_norm_hi) continue;
                       const double arg = 2 * std::numbers::pi / std::sqrt(double(norm(c)));
                       if (arg >= f.r_lo() && arg <= f.r_hi()) ++window;
                       const Complex fv = f.eval(arg);
                       if (fv != Complex(0)) expect += kloosterman(1, 1, c).value / double(norm(c)) * fv;
                     }
                   w.see(r.value, expect, 1 + std::abs(expect));
                 }
                 Check c = w.check(tol.exact);
                 c.pass = c.pass && visited == window;
                 c.detail["visited"] = visited;
                 c.detail["window"] = window;
                 return c;
               }});
  return t;
}

}  // namespace detail

/// Tasks of one suite ("all" concatenates every suite).
inline std::vector<CheckTask> suite_tasks(const std::string& suite, const SuiteOptions& o) {
  if (suite == "identities") return detail::identity_tasks(o);
  if (suite == "poisson") return detail::poisson_tasks(o);
  if (suite == "sieve") return detail::sieve_tasks(o);
  if (suite == "ktransform") return detail::ktransform_tasks(o);
  if (suite == "aggregates") return detail::aggregate_tasks(o);
  if (suite == "all") {
    std::vector<CheckTask> all;
    for (const auto& name : suite_names())
      if (name != "all")
        for (auto& task : suite_tasks(name, o)) all.push_back(std::move(task));
    return all;
  }
  throw std::invalid_argument("unknown suite: " + suite);
}

/// Runs tasks on up to `workers` threads. A task that throws becomes a failing
/// row carrying the message.
inline std::vector<Check> run_tasks(const std::vector<CheckTask>& tasks, unsigned workers) {
  std::vector<Check> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      const auto t0 = std::chrono::steady_clock::now();
      Check c;
      try {
        c = tasks[i].run();
      } catch (const std::exception& e) {
        c = Check{};
        c.pass = false;
        c.defect = std::numeric_limits<double>::infinity();
        c.detail["error"] = e.what();
      }
      c.name = tasks[i].name;
      c.paper_ref = tasks[i].paper_ref;
      c.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      out[i] = std::move(c);
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return out;
}

inline ReportDocument run_suite(const std::string& suite, const SuiteOptions& o) {
  ReportDocument doc;
  doc.suite = suite;
  doc.seed = o.seed;
  doc.checks = run_tasks(suite_tasks(suite, o), o.workers);
  doc.sort();
  return doc;
}

}  // namespace gsk
