#pragma once
// Exact arithmetic in the Gaussian integers Z[i].
//
// Components are 64-bit; every product goes through a 128-bit intermediate
// and throws std::overflow_error if the result leaves the int64 range.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace gsk {

namespace detail {

inline std::int64_t checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("gsk: Gaussian integer overflow");
  return static_cast<std::int64_t>(v);
}

// floor(a / b) for b > 0.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}

inline std::int64_t mod_floor(std::int64_t a, std::int64_t b) {
  std::int64_t r = a % b;
  return r < 0 ? r + b : r;
}

// Nearest integer to a / b (b > 0), ties rounded up.
inline std::int64_t round_div(std::int64_t a, std::int64_t b) {
  return floor_div(checked(static_cast<__int128>(2) * a + b), 2 * b);
}

inline std::int64_t isqrt(std::int64_t n) {
  if (n <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace detail

struct GaussianInt {
  std::int64_t re = 0;
  std::int64_t im = 0;

  constexpr GaussianInt() = default;
  constexpr GaussianInt(std::int64_t r) : re(r) {}  // NOLINT: implicit from integers is intended
  constexpr GaussianInt(std::int64_t r, std::int64_t i) : re(r), im(i) {}

  friend constexpr bool operator==(const GaussianInt&, const GaussianInt&) = default;

  friend GaussianInt operator+(GaussianInt a, GaussianInt b) {
    return {detail::checked(static_cast<__int128>(a.re) + b.re),
            detail::checked(static_cast<__int128>(a.im) + b.im)};
  }
  friend GaussianInt operator-(GaussianInt a, GaussianInt b) {
    return {detail::checked(static_cast<__int128>(a.re) - b.re),
            detail::checked(static_cast<__int128>(a.im) - b.im)};
  }
  friend GaussianInt operator-(GaussianInt a) { return GaussianInt{0} - a; }
  friend GaussianInt operator*(GaussianInt a, GaussianInt b) {
    const __int128 r = static_cast<__int128>(a.re) * b.re - static_cast<__int128>(a.im) * b.im;
    const __int128 i = static_cast<__int128>(a.re) * b.im + static_cast<__int128>(a.im) * b.re;
    return {detail::checked(r), detail::checked(i)};
  }
  GaussianInt& operator+=(GaussianInt b) { return *this = *this + b; }
  GaussianInt& operator-=(GaussianInt b) { return *this = *this - b; }
  GaussianInt& operator*=(GaussianInt b) { return *this = *this * b; }

  friend std::ostream& operator<<(std::ostream& os, const GaussianInt& z) {
    return os << z.re << (z.im < 0 ? "-" : "+") << (z.im < 0 ? -z.im : z.im) << "i";
  }
};

inline constexpr GaussianInt kI{0, 1};

inline GaussianInt conj(GaussianInt z) { return {z.re, -z.im}; }

/// |z|^2.
inline std::int64_t norm(GaussianInt z) {
  return detail::checked(static_cast<__int128>(z.re) * z.re + static_cast<__int128>(z.im) * z.im);
}

inline bool is_zero(GaussianInt z) { return z.re == 0 && z.im == 0; }
inline bool is_unit(GaussianInt z) { return norm(z) == 1; }

inline std::string to_string(GaussianInt z) {
  return std::to_string(z.re) + (z.im < 0 ? "-" : "+") + std::to_string(z.im < 0 ? -z.im : z.im) + "i";
}

/// The four units 1, i, -1, -i in that order.
inline const std::vector<GaussianInt>& units() {
  static const std::vector<GaussianInt> u{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return u;
}

/// Associate with Re > 0 and Im >= 0 (zero maps to zero).
inline GaussianInt canonical_associate(GaussianInt z) {
  if (is_zero(z)) return z;
  for (const auto& u : units()) {
    const GaussianInt w = z * u;
    if (w.re > 0 && w.im >= 0) return w;
  }
  throw std::logic_error("gsk: no canonical associate");  // unreachable
}

inline bool associated(GaussianInt a, GaussianInt b) {
  return canonical_associate(a) == canonical_associate(b);
}

/// Unit u with z = u * canonical_associate(z).
inline GaussianInt unit_part(GaussianInt z) {
  const GaussianInt c = canonical_associate(z);
  for (const auto& u : units())
    if (u * c == z) return u;
  throw std::domain_error("gsk: unit_part of zero");
}

/// True iff d | n in Z[i].
inline bool divides(GaussianInt d, GaussianInt n) {
  if (is_zero(d)) return is_zero(n);
  const std::int64_t nd = norm(d);
  const GaussianInt t = n * conj(d);
  return t.re % nd == 0 && t.im % nd == 0;
}

/// n / d, requiring d | n.
inline GaussianInt exact_div(GaussianInt n, GaussianInt d) {
  if (is_zero(d)) throw std::domain_error("gsk: division by zero");
  const std::int64_t nd = norm(d);
  const GaussianInt t = n * conj(d);
  if (t.re % nd != 0 || t.im % nd != 0) throw std::domain_error("gsk: inexact Gaussian division");
  return {t.re / nd, t.im / nd};
}

/// Euclidean division with nearest rounding: a = q b + r, |r|^2 <= |b|^2 / 2.
inline std::pair<GaussianInt, GaussianInt> divmod_nearest(GaussianInt a, GaussianInt b) {
  if (is_zero(b)) throw std::domain_error("gsk: division by zero");
  const std::int64_t nb = norm(b);
  const GaussianInt t = a * conj(b);
  const GaussianInt q{detail::round_div(t.re, nb), detail::round_div(t.im, nb)};
  return {q, a - q * b};
}

/// Canonical residue of z modulo wO: the unique representative s*w + t*(i w)
/// with s, t in [0, 1), found by flooring the exact rational z conj(w) / |w|^2.
inline GaussianInt reduce_mod(GaussianInt z, GaussianInt w) {
  if (is_zero(w)) throw std::domain_error("gsk: reduction modulo zero");
  const std::int64_t nw = norm(w);
  const GaussianInt t = z * conj(w);
  const GaussianInt q{detail::floor_div(t.re, nw), detail::floor_div(t.im, nw)};
  return z - q * w;
}

inline bool congruent(GaussianInt a, GaussianInt b, GaussianInt w) { return divides(w, a - b); }

/// Canonical-associate highest common factor.
inline GaussianInt gcd(GaussianInt a, GaussianInt b) {
  if (is_zero(a) && is_zero(b)) throw std::domain_error("gsk: gcd(0, 0) is undefined");
  while (!is_zero(b)) {
    const GaussianInt r = divmod_nearest(a, b).second;
    a = b;
    b = r;
  }
  return canonical_associate(a);
}

inline bool coprime(GaussianInt a, GaussianInt b) {
  if (is_zero(a) && is_zero(b)) return false;
  return gcd(a, b) == GaussianInt{1};
}

/// Extended Euclid: returns (g, x, y) with a x + b y = g, g a gcd of (a, b)
/// (not canonicalised).
inline std::tuple<GaussianInt, GaussianInt, GaussianInt> extended_gcd(GaussianInt a, GaussianInt b) {
  GaussianInt r0 = a, r1 = b, x0 = 1, x1 = 0, y0 = 0, y1 = 1;
  while (!is_zero(r1)) {
    const auto [q, r] = divmod_nearest(r0, r1);
    r0 = r1;
    r1 = r;
    x0 = x0 - q * x1;
    std::swap(x0, x1);
    y0 = y0 - q * y1;
    std::swap(y0, y1);
  }
  return {r0, x0, y0};
}

/// (u, t) with r u - s t = 1.
inline std::pair<GaussianInt, GaussianInt> bezout(GaussianInt r, GaussianInt s) {
  if (is_zero(r) || is_zero(s)) throw std::domain_error("gsk: bezout needs nonzero arguments");
  auto [g, x, y] = extended_gcd(r, s);
  if (!is_unit(g)) throw std::domain_error("gsk: bezout arguments are not coprime");
  // r x + s y = g with g a unit; scale by g^{-1} = conj(g).
  const GaussianInt gi = conj(g);
  return {x * gi, -(y * gi)};
}

/// d* with d d* == 1 mod wO, reduced to its canonical residue.
inline GaussianInt inv_mod(GaussianInt d, GaussianInt w) {
  if (is_zero(w)) throw std::domain_error("gsk: inverse modulo zero");
  if (is_unit(w)) return GaussianInt{0};
  auto [g, x, y] = extended_gcd(reduce_mod(d, w), w);
  (void)y;
  if (!is_unit(g)) throw std::domain_error("gsk: element is not invertible modulo w");
  return reduce_mod(x * conj(g), w);
}

// ---------------------------------------------------------------------------
// Primes and factorisation.

inline bool is_rational_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::int64_t p = 3; p * p <= n; p += 2)
    if (n % p == 0) return false;
  return true;
}

inline bool is_gaussian_prime(GaussianInt z) {
  if (z.re == 0 || z.im == 0) {
    const std::int64_t a = std::abs(z.re + z.im);
    return is_rational_prime(a) && a % 4 == 3;
  }
  return is_rational_prime(norm(z));
}

struct Factorization {
  GaussianInt unit{1};
  std::vector<std::pair<GaussianInt, int>> primes;  // canonical, sorted by (norm, re, im)

  GaussianInt product() const {
    GaussianInt acc = unit;
    for (const auto& [p, e] : primes)
      for (int k = 0; k < e; ++k) acc *= p;
    return acc;
  }
};

namespace detail {

// Canonical Gaussian primes above the rational prime p.
inline std::vector<GaussianInt> primes_above(std::int64_t p) {
  if (p == 2) return {GaussianInt{1, 1}};
  if (p % 4 == 3) return {GaussianInt{p, 0}};
  for (std::int64_t a = 1; a * a < p; ++a) {
    const std::int64_t b2 = p - a * a;
    const std::int64_t b = isqrt(b2);
    if (b * b == b2) {
      const GaussianInt x = canonical_associate({a, b});
      const GaussianInt y = canonical_associate(conj(x));
      return x.im < y.im ? std::vector<GaussianInt>{y, x} : std::vector<GaussianInt>{x, y};
    }
  }
  throw std::logic_error("gsk: p = 1 mod 4 not a sum of two squares");
}

inline bool prime_order(const GaussianInt& a, const GaussianInt& b) {
  const auto na = norm(a), nb = norm(b);
  if (na != nb) return na < nb;
  if (a.re != b.re) return a.re < b.re;
  return a.im < b.im;
}

}  // namespace detail

/// Trial-division factorisation through the norm.
inline Factorization factorize(GaussianInt n) {
  if (is_zero(n)) throw std::domain_error("gsk: factorize(0)");
  Factorization f;
  std::int64_t m = norm(n);
  GaussianInt rest = n;
  auto strip = [&](std::int64_t p) {
    for (const GaussianInt& pi : detail::primes_above(p)) {
      int e = 0;
      while (divides(pi, rest)) {
        rest = exact_div(rest, pi);
        ++e;
      }
      if (e > 0) f.primes.emplace_back(pi, e);
    }
  };
  for (std::int64_t p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    while (m % p == 0) m /= p;
    strip(p);
  }
  if (m > 1) strip(m);
  std::sort(f.primes.begin(), f.primes.end(),
            [](const auto& a, const auto& b) { return detail::prime_order(a.first, b.first); });
  if (!is_unit(rest)) throw std::logic_error("gsk: factorisation left a non-unit cofactor");
  f.unit = rest;
  return f;
}

/// Number of prime ideals containing n.
inline int omega(GaussianInt n) { return static_cast<int>(factorize(n).primes.size()); }

inline int moebius(GaussianInt n) {
  const Factorization f = factorize(n);
  for (const auto& pe : f.primes)
    if (pe.second > 1) return 0;
  return (f.primes.size() % 2 == 0) ? 1 : -1;
}

/// All divisors of n. By default every associate is listed (4 per ideal), so
/// sums such as (1/4) sum_{d | n} mu(d) run over the right index set.
inline std::vector<GaussianInt> divisors(GaussianInt n, bool up_to_units = false) {
  const Factorization f = factorize(n);
  std::vector<GaussianInt> out{GaussianInt{1}};
  for (const auto& [p, e] : f.primes) {
    std::vector<GaussianInt> next;
    next.reserve(out.size() * static_cast<std::size_t>(e + 1));
    for (const auto& d : out) {
      GaussianInt pk{1};
      for (int k = 0; k <= e; ++k) {
        next.push_back(d * pk);
        pk *= p;
      }
    }
    out = std::move(next);
  }
  if (up_to_units) {
    for (auto& d : out) d = canonical_associate(d);
  } else {
    std::vector<GaussianInt> all;
    all.reserve(out.size() * 4);
    for (const auto& d : out)
      for (const auto& u : units()) all.push_back(d * u);
    out = std::move(all);
  }
  std::sort(out.begin(), out.end(), detail::prime_order);
  return out;
}

/// Complete residue system modulo wO: exactly |w|^2 canonical residues.
inline std::vector<GaussianInt> residues_mod(GaussianInt w) {
  if (is_zero(w)) throw std::domain_error("gsk: residues modulo zero");
  // The fundamental parallelogram spanned by w and iw lies in this box.
  const std::int64_t a = w.re, b = w.im;
  const std::int64_t xs[] = {0, a, -b, a - b};
  const std::int64_t ys[] = {0, b, a, a + b};
  const auto [xlo, xhi] = std::minmax_element(std::begin(xs), std::end(xs));
  const auto [ylo, yhi] = std::minmax_element(std::begin(ys), std::end(ys));
  std::vector<GaussianInt> out;
  out.reserve(static_cast<std::size_t>(norm(w)));
  for (std::int64_t x = *xlo; x <= *xhi; ++x)
    for (std::int64_t y = *ylo; y <= *yhi; ++y) {
      const GaussianInt z{x, y};
      if (reduce_mod(z, w) == z) out.push_back(z);
    }
  return out;
}

inline std::vector<GaussianInt> reduced_residues_mod(GaussianInt w) {
  std::vector<GaussianInt> out;
  for (const auto& z : residues_mod(w))
    if (coprime(z, w)) out.push_back(z);
  return out;
}

/// Enumerates every z != 0 with lo < |z|^2 <= hi (all associates), in
/// deterministic (re, im) order.
inline void for_each_in_annulus(double lo, double hi, const std::function<void(GaussianInt)>& fn) {
  if (!(hi > lo) || hi < 1) return;
  const std::int64_t r = detail::isqrt(static_cast<std::int64_t>(std::floor(hi)));
  for (std::int64_t x = -r; x <= r; ++x)
    for (std::int64_t y = -r; y <= r; ++y) {
      const auto n = static_cast<double>(x * x + y * y);
      if (n > lo && n <= hi) fn(GaussianInt{x, y});
    }
}

inline std::vector<GaussianInt> annulus(double lo, double hi) {
  std::vector<GaussianInt> out;
  for_each_in_annulus(lo, hi, [&](GaussianInt z) { out.push_back(z); });
  return out;
}

/// Number of Gaussian primes (every associate counted) with x/2 < |p|^2 <= x.
inline std::int64_t gaussian_prime_count(double x) {
  std::int64_t count = 0;
  for_each_in_annulus(x / 2, x, [&](GaussianInt z) {
    if (is_gaussian_prime(z)) ++count;
  });
  return count;
}

/// [SL(2, Z[i]) : Gamma_0(r)] = |r|^2 prod_{prime ideals containing r} (1 + 1/|p|^2).
inline std::int64_t index_gamma0(GaussianInt r) {
  if (is_zero(r)) throw std::domain_error("gsk: index_gamma0(0)");
  std::int64_t idx = 1;
  for (const auto& [p, e] : factorize(r).primes) {
    const std::int64_t np = norm(p);
    for (int k = 1; k < e; ++k) idx = detail::checked(static_cast<__int128>(idx) * np);
    idx = detail::checked(static_cast<__int128>(idx) * (np + 1));
  }
  return idx;
}

}  // namespace gsk
