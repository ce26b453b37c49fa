#pragma once
// Additive characters e(Re(.)) on Z[i], simple Kloosterman sums, Ramanujan-type
// sums and the cusp-reduction helpers built on them.
//
// Every phase is formed as an exact rational num / den in [0, 1) before the
// single complex exponential, so identities that should cancel exactly do.

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "gsk/zi_core.hpp"

namespace gsk {

using Complex = std::complex<double>;

/// A reduced fraction in [0, 1).
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational phase(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw std::domain_error("gsk: phase denominator must be positive");
    num = detail::mod_floor(num, den);
    const std::int64_t g = std::gcd(num, den);
    return {num / g, den / g};
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct CharacterValue {
  Complex value;
  std::optional<Rational> exact_phase;  // set whenever the argument was exact
};

namespace detail {

inline Complex cis_phase(std::int64_t num, std::int64_t den) {
  const double t = 2.0 * std::numbers::pi * static_cast<double>(mod_floor(num, den)) / static_cast<double>(den);
  return {std::cos(t), std::sin(t)};
}

// Numerator of Re(a / w) over the denominator |w|^2.
inline std::int64_t re_numerator(GaussianInt a, GaussianInt w) { return (a * conj(w)).re; }

}  // namespace detail

inline CharacterValue e_re(Rational q) {
  const Rational r = Rational::phase(q.num, q.den);
  return {detail::cis_phase(r.num, r.den), r};
}

/// e(Re(a / w)) with the phase Re(a conj(w)) / |w|^2 kept exact.
inline CharacterValue e_re(GaussianInt a, GaussianInt w) {
  if (is_zero(w)) throw std::domain_error("gsk: e_re with zero denominator");
  return e_re(Rational::phase(detail::re_numerator(a, w), norm(w)));
}

inline CharacterValue e_re(Complex z) {
  const double t = 2.0 * std::numbers::pi * (z.real() - std::floor(z.real()));
  return {{std::cos(t), std::sin(t)}, std::nullopt};
}

// ---------------------------------------------------------------------------
// Reduced residues with their inverses, memoised per ideal.

struct ReducedResidueTable {
  GaussianInt modulus;  // canonical
  std::vector<GaussianInt> residues;
  std::vector<GaussianInt> inverses;
};

inline const ReducedResidueTable& reduced_residue_table(GaussianInt w) {
  static std::shared_mutex mutex;
  static std::map<std::pair<std::int64_t, std::int64_t>, std::unique_ptr<ReducedResidueTable>> memo;
  const GaussianInt c = canonical_associate(w);
  if (is_zero(c)) throw std::domain_error("gsk: residue table modulo zero");
  const auto key = std::make_pair(c.re, c.im);
  {
    std::shared_lock lock(mutex);
    if (auto it = memo.find(key); it != memo.end()) return *it->second;
  }
  auto table = std::make_unique<ReducedResidueTable>();
  table->modulus = c;
  table->residues = reduced_residues_mod(c);
  table->inverses.reserve(table->residues.size());
  for (const auto& d : table->residues) table->inverses.push_back(inv_mod(d, c));
  std::unique_lock lock(mutex);
  auto [it, inserted] = memo.try_emplace(key, std::move(table));
  return *it->second;
}

struct KloostermanResult {
  Complex value;
  GaussianInt modulus;
  std::int64_t term_count = 0;
};

/// Simple Kloosterman sum S(u, v; w) = sum_{d mod w, (d,w)~1} e(Re((u d* + v d) / w)).
inline KloostermanResult kloosterman(GaussianInt u, GaussianInt v, GaussianInt w) {
  if (is_zero(w)) throw std::domain_error("gsk: Kloosterman sum modulo zero");
  // Residues and inverses depend only on the ideal wO; the phase uses w itself
  // (S(u, v; i w) = S(-u, v; w), so the sum is not an ideal invariant).
  const ReducedResidueTable& t = reduced_residue_table(w);
  const std::int64_t den = norm(w);
  const GaussianInt ur = reduce_mod(u, w), vr = reduce_mod(v, w);
  Complex sum = 0;
  for (std::size_t j = 0; j < t.residues.size(); ++j) {
    const GaussianInt x = ur * t.inverses[j] + vr * t.residues[j];
    sum += detail::cis_phase(detail::re_numerator(x, w), den);
  }
  return {sum, w, static_cast<std::int64_t>(t.residues.size())};
}

/// S(r* omega, omega'; p s) with r r* == 1 mod psO: the Kloosterman sum at the
/// cusp pair (1/s, infinity) after reduction.
inline KloostermanResult kloosterman_cusp(GaussianInt omega, GaussianInt omega_prime, GaussianInt p,
                                          GaussianInt s, GaussianInt r) {
  if (is_zero(p) || is_zero(r) || is_zero(s)) throw std::domain_error("gsk: kloosterman_cusp needs p, r, s != 0");
  if (!coprime(p, r)) throw std::domain_error("gsk: kloosterman_cusp needs (p, r) ~ 1");
  if (!coprime(r, s)) throw std::domain_error("gsk: kloosterman_cusp needs (r, s) ~ 1");
  const GaussianInt ps = p * s;
  const GaussianInt r_star = inv_mod(r, ps);
  return kloosterman(r_star * omega, omega_prime, ps);
}

/// sum_{n mod m} e(Re((a - b) n / m)).
inline Complex char_orthogonality(GaussianInt m, GaussianInt a, GaussianInt b) {
  if (is_zero(m)) throw std::domain_error("gsk: orthogonality modulo zero");
  const std::int64_t den = norm(m);
  const GaussianInt diff = a - b;
  Complex sum = 0;
  for (const auto& n : residues_mod(m)) sum += detail::cis_phase(detail::re_numerator(diff * n, m), den);
  return sum;
}

/// c_q(b, h; k) by direct summation over a mod q with (a, q) ~ 1, a b == h.
inline Complex ramanujan_c(GaussianInt q, GaussianInt b, GaussianInt h, GaussianInt k) {
  if (is_zero(q)) throw std::domain_error("gsk: ramanujan_c modulo zero");
  const ReducedResidueTable& t = reduced_residue_table(q);
  const std::int64_t den = norm(q);
  Complex sum = 0;
  for (const auto& a : t.residues) {
    if (!congruent(a * b, h, q)) continue;
    sum += detail::cis_phase(detail::re_numerator(a * k, q), den);
  }
  return sum;
}

/// c_q(b, h; k) through the divisor-sum reduction: zero unless (b,q) ~ (h,q) ~ c,
/// otherwise (1/4) sum_{t | (c,k)} mu(c/t) |t|^2 e(Re((h/c)(k/t)(b/t)* / (q/c))).
/// `c_unit` selects which associate of gcd(b, q) plays the role of c; the value
/// does not depend on it.
inline Complex ramanujan_c_closed(GaussianInt q, GaussianInt b, GaussianInt h, GaussianInt k,
                                  GaussianInt c_unit = 1) {
  if (is_zero(q)) throw std::domain_error("gsk: ramanujan_c_closed modulo zero");
  if (!is_unit(c_unit)) throw std::domain_error("gsk: c_unit must be a unit");
  const GaussianInt c = gcd(b, q) * c_unit;
  if (!associated(c, gcd(h, q))) return 0.0;
  const GaussianInt q_over_c = exact_div(q, c);
  const GaussianInt h_over_c = exact_div(h, c);
  const GaussianInt ck = gcd(c, k);
  const std::int64_t den = norm(q_over_c);
  Complex sum = 0;
  for (const auto& t : divisors(ck)) {
    const GaussianInt c_over_t = exact_div(c, t);
    if (!coprime(c_over_t, q_over_c)) continue;
    const GaussianInt b_over_t = exact_div(b, t);
    if (!coprime(b_over_t, q_over_c)) continue;  // never triggers once (c/t, q/c) ~ 1
    const int mu = moebius(c_over_t);
    if (mu == 0) continue;
    const GaussianInt num = h_over_c * exact_div(k, t) * inv_mod(b_over_t, q_over_c);
    sum += static_cast<double>(mu * norm(t)) * detail::cis_phase(detail::re_numerator(num, q_over_c), den);
  }
  return sum / 4.0;
}

/// S(k, 0; q) = c_q(0, 0; k) in closed form:
/// mu(q/(q,k)) |(q,k)|^2 prod_{p | (q,k), p does not divide q/(q,k)} (1 - 1/|p|^2).
inline double kloosterman_degenerate_closed(GaussianInt q, GaussianInt k) {
  if (is_zero(q)) throw std::domain_error("gsk: modulus zero");
  const GaussianInt g = gcd(q, k);
  const GaussianInt rest = exact_div(q, g);
  double value = static_cast<double>(moebius(rest)) * static_cast<double>(norm(g));
  if (value == 0.0 || is_unit(g)) return value;
  for (const auto& [p, e] : factorize(g).primes) {
    if (divides(p, rest)) continue;
    value *= 1.0 - 1.0 / static_cast<double>(norm(p));
  }
  return value;
}

/// Evaluated delta symbol for the cusps infinity and 1/s:
/// 4 if omega = omega' = 0, 2 if omega' = +-omega != 0, else 0.
inline int delta_symbol(GaussianInt omega, GaussianInt omega_prime) {
  int count = 0;
  for (const auto& u : units())
    if (u * omega * u == omega_prime) ++count;
  return count;
}

/// Thread-safe memo of S(u, v; w) keyed by (+-w, u mod w, v mod w).
class KloostermanCache {
 public:
  double operator()(GaussianInt u, GaussianInt v, GaussianInt w) {
    // S(u, v; -w) = S(u, v; w); the other two associates give a different sum.
    const GaussianInt m = (w.re > 0 || (w.re == 0 && w.im > 0)) ? w : -w;
    const GaussianInt ur = reduce_mod(u, m), vr = reduce_mod(v, m);
    const Key key{m.re, m.im, ur.re, ur.im, vr.re, vr.im};
    {
      std::shared_lock lock(mutex_);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    const double value = kloosterman(ur, vr, m).value.real();
    std::unique_lock lock(mutex_);
    memo_.emplace(key, value);
    return value;
  }
  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return memo_.size();
  }

 private:
  using Key = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t, std::int64_t, std::int64_t>;
  mutable std::shared_mutex mutex_;
  std::map<Key, double> memo_;
};

}  // namespace gsk
