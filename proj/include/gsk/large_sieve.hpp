#pragma once
// The analytic large sieve over Z[i]: lattice trigonometric polynomials, the
// spacing count M(delta, R), the general inequality and its Farey-point special
// case, plus seeded random batteries for both.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gsk/char_sums.hpp"
#include "gsk/fourier_poisson.hpp"
#include "gsk/zi_core.hpp"

namespace gsk {

/// Finitely supported map n -> c_n on nonzero Gaussian integers.
struct CoefficientVector {
  std::vector<std::pair<GaussianInt, Complex>> terms;

  void add(GaussianInt n, Complex c) { terms.emplace_back(n, c); }
  bool empty() const { return terms.empty(); }
  /// ||c||_2^2 = sum |c_n|^2.
  double norm2() const {
    double s = 0;
    for (const auto& [n, c] : terms) s += std::norm(c);
    return s;
  }
  double l1() const {
    double s = 0;
    for (const auto& [n, c] : terms) s += std::abs(c);
    return s;
  }
  std::int64_t max_norm() const {
    std::int64_t m = 0;
    for (const auto& [n, c] : terms) m = std::max(m, norm(n));
    return m;
  }
};

namespace detail {

inline void check_support(const CoefficientVector& c, double N) {
  for (const auto& [n, v] : c.terms)
    if (is_zero(n) || static_cast<double>(norm(n)) > N)
      throw std::domain_error("gsk: coefficient index outside 0 < |n|^2 <= N");
}

}  // namespace detail

/// S(alpha, N) = sum_{0 < |n|^2 <= N} c_n e(Re(alpha n)).
inline Complex trig_poly(const CoefficientVector& c, Complex alpha, double N) {
  detail::check_support(c, N);
  Complex s = 0;
  for (const auto& [n, v] : c.terms) s += v * e_re(alpha * Complex(double(n.re), double(n.im))).value;
  return s;
}

/// S(a / q, N) with every phase Re(a n / q) formed exactly.
inline Complex trig_poly(const CoefficientVector& c, GaussianInt a, GaussianInt q, double N) {
  detail::check_support(c, N);
  Complex s = 0;
  const std::int64_t den = norm(q);
  for (const auto& [n, v] : c.terms) s += v * detail::cis_phase(detail::re_numerator(a * n, q), den);
  return s;
}

/// M(delta, R) = max_r #{p : ||alpha_p - alpha_r||^2 < delta}.
inline std::size_t spacing_M(double delta, const std::vector<Complex>& points) {
  if (!(delta > 0 && delta <= 0.5)) throw std::domain_error("gsk: spacing_M needs 0 < delta <= 1/2");
  std::size_t best = 0;
  for (const auto& ar : points) {
    std::size_t count = 0;
    for (const auto& ap : points) {
      const double d = nearest_distance(ap - ar);
      if (d * d < delta) ++count;
    }
    best = std::max(best, count);
  }
  return best;
}

struct SieveResult {
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  std::size_t points = 0;
  std::size_t M = 0;
};

inline double guarded_ratio(double lhs, double rhs) { return lhs == 0 ? 0.0 : lhs / rhs; }

/// sum_r |S(alpha_r, N)|^2 against 16 M(delta, R) (2N + 1/delta) ||c||_2^2.
inline SieveResult general_sieve_check(const std::vector<Complex>& points, const CoefficientVector& c, double N,
                                       double delta) {
  if (!(N >= 1)) throw std::domain_error("gsk: general_sieve_check needs N >= 1");
  SieveResult r;
  r.points = points.size();
  r.M = points.empty() ? 0 : spacing_M(delta, points);
  for (const auto& a : points) r.lhs += std::norm(trig_poly(c, a, N));
  r.rhs = 16.0 * static_cast<double>(r.M) * (2 * N + 1 / delta) * c.norm2();
  r.ratio = guarded_ratio(r.lhs, r.rhs);
  return r;
}

struct FareyPoint {
  GaussianInt q;
  GaussianInt a;
  Complex alpha;  // a / q
};

/// Every pair (q, a mod qO) with q = 0 mod dO, 0 < |q|^2 <= Q and (a, q) ~ 1.
/// Associated moduli are distinct summation indices, so a / q values repeat mod O
/// across units; the pairs themselves never do.
inline std::vector<FareyPoint> farey_points(double Q, GaussianInt d) {
  if (is_zero(d)) throw std::domain_error("gsk: farey_points needs d != 0");
  std::vector<FareyPoint> out;
  if (!(Q >= 1)) return out;
  const auto qmax = static_cast<std::int64_t>(std::floor(Q));
  // q = d m with |m|^2 <= Q / |d|^2.
  for (const auto& m : annulus(0.0, static_cast<double>(qmax) / static_cast<double>(norm(d)))) {
    const GaussianInt q = d * m;
    if (norm(q) > qmax) continue;
    for (const auto& a : reduced_residues_mod(q)) {
      const Complex qc(double(q.re), double(q.im));
      out.push_back({q, a, Complex(double(a.re), double(a.im)) / qc});
    }
  }
  return out;
}

/// sum over Farey points of |S(a/q, N)|^2 against 64 (2N + Q^2 / |d|^2) ||c||_2^2.
inline SieveResult special_sieve_check(double Q, GaussianInt d, const CoefficientVector& c, double N) {
  if (!(Q >= 1 && N >= 1)) throw std::domain_error("gsk: special_sieve_check needs Q, N >= 1");
  SieveResult r;
  const auto pts = farey_points(Q, d);
  r.points = pts.size();
  for (const auto& p : pts) r.lhs += std::norm(trig_poly(c, p.a, p.q, N));
  r.rhs = 64.0 * (2 * N + Q * Q / static_cast<double>(norm(d))) * c.norm2();
  r.ratio = guarded_ratio(r.lhs, r.rhs);
  return r;
}

struct FareySpacing {
  std::size_t pairs = 0;        // pairs distinct mod O
  std::size_t coincident = 0;   // pairs equal mod O
  std::size_t violations = 0;   // ||.||^2 < |d|^2 / |q_p q_r|^2 or < |d|^2 / Q^2
  std::size_t max_multiplicity = 0;
};

/// Pairwise spacing of farey_points(Q, d) in exact integer arithmetic.
inline FareySpacing farey_spacing_exact(std::int64_t Q, GaussianInt d) {
  const auto pts = farey_points(static_cast<double>(Q), d);
  FareySpacing s;
  const __int128 dn = norm(d);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::size_t mult = 0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const auto& p = pts[i];
      const auto& r = pts[j];
      // a_p/q_p - a_r/q_r = P / D with D = |q_p q_r|^2.
      const GaussianInt qq = p.q * r.q;
      const GaussianInt P = (p.a * r.q - r.a * p.q) * conj(qq);
      const std::int64_t D = norm(qq);
      const std::int64_t x = detail::mod_floor(P.re, D), y = detail::mod_floor(P.im, D);
      const __int128 ux = std::min(x, D - x), uy = std::min(y, D - y);
      const __int128 num = ux * ux + uy * uy;  // ||.||^2 = num / D^2
      if (num == 0) {
        ++mult;
        if (j > i) ++s.coincident;
        continue;
      }
      if (j <= i) continue;
      ++s.pairs;
      const __int128 D2 = static_cast<__int128>(D) * D;
      if (num * D < dn * D2 || num * Q * Q < dn * D2) ++s.violations;
    }
    s.max_multiplicity = std::max(s.max_multiplicity, mult);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Seeded random batteries.

struct SieveBattery {
  std::size_t trials = 0;
  std::size_t violations = 0;
  double max_ratio = 0;
  double mean_ratio = 0;
};

namespace detail {

inline CoefficientVector random_coefficients(std::mt19937_64& rng, double N) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::bernoulli_distribution keep(0.7);
  CoefficientVector c;
  for (const auto& n : annulus(0.0, N))
    if (keep(rng)) c.add(n, Complex(u(rng), u(rng)));
  return c;
}

inline void tally(SieveBattery& b, const SieveResult& r) {
  ++b.trials;
  if (r.ratio > 1) ++b.violations;
  b.max_ratio = std::max(b.max_ratio, r.ratio);
  b.mean_ratio += r.ratio;
}

}  // namespace detail

/// General inequality on random points, coefficients, N <= max_N and delta.
/// Some point sets are clustered so that M(delta, R) > 1 is exercised.
inline SieveBattery general_sieve_battery(std::size_t trials, std::uint64_t seed, double max_R = 30,
                                          double max_N = 50) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0, 1);
  SieveBattery b;
  for (std::size_t t = 0; t < trials; ++t) {
    const double N = 1 + (max_N - 1) * u01(rng);
    const double delta = std::max(1e-3, 0.5 * u01(rng));
    const auto R = static_cast<std::size_t>(1 + std::floor(max_R * u01(rng)));
    const bool clustered = u01(rng) < 0.3;
    std::vector<Complex> pts;
    for (std::size_t r = 0; r < R; ++r) {
      if (clustered && !pts.empty() && u01(rng) < 0.5)
        pts.push_back(pts[static_cast<std::size_t>(u01(rng) * double(pts.size()))] + 0.01 * Complex(u01(rng), u01(rng)));
      else
        pts.push_back(Complex(4 * u01(rng) - 2, 4 * u01(rng) - 2));
    }
    detail::tally(b, general_sieve_check(pts, detail::random_coefficients(rng, N), N, delta));
  }
  if (b.trials) b.mean_ratio /= double(b.trials);
  return b;
}

/// Special inequality with Q <= max_Q, N <= max_N and random d with |d|^2 <= Q.
inline SieveBattery special_sieve_battery(std::size_t trials, std::uint64_t seed, double max_Q = 30,
                                          double max_N = 50) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0, 1);
  SieveBattery b;
  for (std::size_t t = 0; t < trials; ++t) {
    const double Q = 1 + (max_Q - 1) * u01(rng);
    const double N = 1 + (max_N - 1) * u01(rng);
    const auto ds = annulus(0.0, std::min(Q, 8.0));
    const GaussianInt d = ds[static_cast<std::size_t>(u01(rng) * double(ds.size()))];
    detail::tally(b, special_sieve_check(Q, d, detail::random_coefficients(rng, N), N));
  }
  if (b.trials) b.mean_ratio /= double(b.trials);
  return b;
}

}  // namespace gsk
