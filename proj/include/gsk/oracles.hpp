#pragma once
// Brute-force reference implementations used only by the test suites and the
// verification batteries. None of these share code paths with the library
// routines they check beyond GaussianInt arithmetic itself.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <set>
#include <utility>
#include <vector>

#include "gsk/zi_core.hpp"

namespace gsk::oracle {

/// True iff d | n, by checking n / d has integer coordinates in floating point.
inline bool divides_fp(GaussianInt d, GaussianInt n) {
  const std::complex<double> q = std::complex<double>(double(n.re), double(n.im)) / std::complex<double>(double(d.re), double(d.im));
  return std::abs(q.real() - std::round(q.real())) < 1e-9 && std::abs(q.imag() - std::round(q.imag())) < 1e-9;
}

/// Every divisor of n (all associates) by scanning the disc |d|^2 <= |n|^2.
inline std::vector<GaussianInt> divisors_scan(GaussianInt n) {
  std::vector<GaussianInt> out;
  const std::int64_t nn = n.re * n.re + n.im * n.im;
  const auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(nn))) + 1;
  for (std::int64_t x = -r; x <= r; ++x)
    for (std::int64_t y = -r; y <= r; ++y) {
      if (x == 0 && y == 0) continue;
      if (x * x + y * y > nn) continue;
      if (divides_fp({x, y}, n)) out.push_back({x, y});
    }
  return out;
}

/// Largest-norm common divisor by scanning.
inline std::int64_t gcd_norm_scan(GaussianInt a, GaussianInt b) {
  std::int64_t best = 0;
  for (const auto& d : divisors_scan(is_zero(a) ? b : a))
    if (divides_fp(d, b) || is_zero(b)) best = std::max(best, d.re * d.re + d.im * d.im);
  return best;
}

/// Residues modulo w: classes of the box [0, |w|^2)^2 deduplicated by
/// membership testing against already chosen representatives.
inline std::int64_t residue_class_count(GaussianInt w) {
  const std::int64_t n = w.re * w.re + w.im * w.im;
  std::vector<GaussianInt> reps;
  for (std::int64_t x = 0; x < n; ++x)
    for (std::int64_t y = 0; y < n; ++y) {
      const GaussianInt z{x, y};
      bool fresh = true;
      for (const auto& r : reps)
        if (divides_fp(w, z - r)) {
          fresh = false;
          break;
        }
      if (fresh) reps.push_back(z);
    }
  return static_cast<std::int64_t>(reps.size());
}

/// |P^1(O / rO)|: pairs (c, d) mod r with (c, d, r) ~ 1, divided by the number
/// of reduced residues (the scaling orbits all have that size).
inline std::int64_t projective_line_count(GaussianInt r) {
  const auto res = residues_mod(r);
  std::int64_t pairs = 0, units_mod = 0;
  for (const auto& c : res) {
    if (coprime(c, r) || is_unit(r)) ++units_mod;
    for (const auto& d : res) {
      GaussianInt g = r;
      if (!is_zero(c)) g = gcd(g, c);
      if (!is_zero(d)) g = gcd(g, d);
      if (is_unit(g)) ++pairs;
    }
  }
  return pairs / units_mod;
}

/// Kloosterman sum with inverses located by search and phases in floating point.
inline std::complex<double> kloosterman(GaussianInt u, GaussianInt v, GaussianInt w) {
  const auto res = residues_mod(w);
  const std::complex<double> wc(double(w.re), double(w.im));
  std::complex<double> sum = 0;
  for (const auto& d : res) {
    GaussianInt dstar{0};
    bool found = false;
    for (const auto& e : res)
      if (divides_fp(w, d * e - GaussianInt{1})) {
        dstar = e;
        found = true;
        break;
      }
    if (!found) continue;
    const GaussianInt x = u * dstar + v * d;
    const double phase = (std::complex<double>(double(x.re), double(x.im)) / wc).real();
    sum += std::polar(1.0, 2 * std::numbers::pi * phase);
  }
  return sum;
}

}  // namespace gsk::oracle
