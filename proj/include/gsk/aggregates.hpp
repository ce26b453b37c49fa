#pragma once
// Aggregate sums of Kloosterman sums: the five-fold sum R, the cusp sums
// K_{r,s}(n, l) and Lambda over B(R, S), the level sum over multiples of q, and
// the smooth bilinear sum. Each evaluator has a second, independently ordered
// evaluation to check against.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gsk/char_sums.hpp"
#include "gsk/smooth_weights.hpp"
#include "gsk/zi_core.hpp"

namespace gsk {

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultTermBudget = 1e7;

using PointFn = std::function<Complex(GaussianInt)>;

namespace detail {

/// z with lo < |z|^2 <= hi.
inline std::vector<GaussianInt> shell(double lo, double hi) { return annulus(lo, hi); }

inline void check_budget(double terms, double budget) {
  if (terms > budget)
    throw ResourceError("gsk: " + std::to_string(static_cast<long long>(terms)) + " terms exceed budget " +
                        std::to_string(static_cast<long long>(budget)));
}

inline PointFn ones() {
  return [](GaussianInt) { return Complex(1.0); };
}

}  // namespace detail

// ---------------------------------------------------------------------------
// B(R, S) and the cusp sums.

/// B(R, S) = {(r, s) : R/2 < |r|^2 <= R, S/2 < |s|^2 <= S, (r, s) ~ 1}.
inline std::vector<std::pair<GaussianInt, GaussianInt>> enumerate_B(double R, double S) {
  std::vector<std::pair<GaussianInt, GaussianInt>> out;
  const auto rs = detail::shell(R / 2, R), ss = detail::shell(S / 2, S);
  for (const auto& r : rs)
    for (const auto& s : ss)
      if (coprime(r, s)) out.emplace_back(r, s);
  return out;
}

/// K_{r,s}(n, l) = sum_{p != 0, (p, r) ~ 1} g(|p|^2) S(r* n, l; p s). `shift`
/// moves r* by a multiple of p s; the value must not depend on it.
inline Complex K_rs(GaussianInt r, GaussianInt s, GaussianInt n, GaussianInt l, const RadialWeight& g,
                    GaussianInt shift = 0) {
  if (is_zero(r) || is_zero(s)) throw std::domain_error("gsk: K_rs needs r, s != 0");
  if (!coprime(r, s)) throw std::domain_error("gsk: K_rs needs (r, s) ~ 1");
  Complex sum = 0;
  for (const auto& p : detail::shell(std::ceil(g.r_lo()) - 1, g.r_hi())) {
    if (!coprime(p, r)) continue;
    const Complex gp = g.eval(static_cast<double>(norm(p)));
    if (gp == Complex(0)) continue;
    const GaussianInt ps = p * s;
    const GaussianInt r_star = inv_mod(r, ps) + shift * ps;
    sum += gp * kloosterman(r_star * n, l, ps).value;
  }
  return sum;
}

struct CuspSumSpec {
  double R = 1, S = 1, N = 1, L = 1, P = 1;
  std::function<Complex(GaussianInt, GaussianInt)> b = [](GaussianInt, GaussianInt) { return Complex(1.0); };
  PointFn a = detail::ones();
  PointFn A = detail::ones();
  RadialWeight g;  // in x = |p|^2, supported in [P/2, P]
  double budget = kDefaultTermBudget;

  /// X = P S sqrt(R) / (4 pi^2 sqrt(L N)).
  double X() const { return P * S * std::sqrt(R) / (4 * std::numbers::pi * std::numbers::pi * std::sqrt(L * N)); }
};

struct AggregateResult {
  Complex value;      // primary evaluation order
  Complex alternate;  // second evaluation order
  double defect = 0;  // |value - alternate| / max(1, |value|)
  double terms = 0;   // elementary Kloosterman summands
  double trivial = 0; // triangle-inequality envelope
  double ratio = 0;   // |value| / trivial
};

/// Lambda = sum_{B(R,S)} b(r,s) sum_{N/4 < |n|^2 <= N} a_n sum_{L/2 < |l|^2 <= L} A(l) K_{r,s}(n, l),
/// once with the (r, s) loop outermost and once with p outermost through a cache.
inline AggregateResult lambda_sum(const CuspSumSpec& spec) {
  const double Q = spec.R * spec.S;
  if (Q < std::max(std::sqrt(spec.N), std::sqrt(spec.L)))
    throw std::domain_error("gsk: lambda_sum needs R S >= max(sqrt N, sqrt L)");
  const double lo = spec.g.r_lo(), hi = spec.g.r_hi();
  if (lo < spec.P / 2 || hi > spec.P) throw std::domain_error("gsk: g must be supported in [P/2, P]");
  const auto B = enumerate_B(spec.R, spec.S);
  const auto ns = detail::shell(spec.N / 4, spec.N), ls = detail::shell(spec.L / 2, spec.L);
  const auto ps = detail::shell(std::ceil(lo) - 1, hi);

  AggregateResult res;
  for (const auto& [r, s] : B)
    for (const auto& p : ps) res.terms += double(ns.size() * ls.size()) * double(norm(p * s));
  detail::check_budget(res.terms, spec.budget);

  double sb = 0, sa = 0, sA = 0, maxK = 0;
  for (const auto& [r, s] : B) {
    const Complex br = spec.b(r, s);
    sb += std::abs(br);
    Complex inner = 0;
    for (const auto& n : ns) {
      const Complex an = spec.a(n);
      for (const auto& l : ls) {
        const Complex k = K_rs(r, s, n, l, spec.g);
        maxK = std::max(maxK, std::abs(k));
        inner += an * spec.A(l) * k;
      }
    }
    res.value += br * inner;
  }
  for (const auto& n : ns) sa += std::abs(spec.a(n));
  for (const auto& l : ls) sA += std::abs(spec.A(l));

  KloostermanCache cache;
  for (const auto& p : ps) {
    const Complex gp = spec.g.eval(static_cast<double>(norm(p)));
    if (gp == Complex(0)) continue;
    for (const auto& l : ls) {
      const Complex Al = spec.A(l);
      for (const auto& [r, s] : B) {
        if (!coprime(p, r)) continue;
        const GaussianInt m = p * s;
        const GaussianInt r_star = inv_mod(r, m);
        Complex inner = 0;
        for (const auto& n : ns) inner += spec.a(n) * cache(r_star * n, l, m);
        res.alternate += gp * Al * spec.b(r, s) * inner;
      }
    }
  }
  res.defect = std::abs(res.value - res.alternate) / std::max(1.0, std::abs(res.value));
  res.trivial = sb * sa * sA * maxK;
  res.ratio = res.trivial > 0 ? std::abs(res.value) / res.trivial : 0.0;
  return res;
}

// ---------------------------------------------------------------------------
// The five-fold sum R.

using FiveFoldWeight = std::function<double(GaussianInt, GaussianInt, GaussianInt, GaussianInt, GaussianInt)>;

struct AggregateSpec {
  double H = 1, K = 1, L = 1, P = 1, Q = 1;
  double delta = 0.5;
  PointFn theta = detail::ones();    // theta_p
  PointFn phi_h = detail::ones();    // phi_h
  PointFn upsilon = detail::ones();  // Upsilon_l
  FiveFoldWeight weight;             // phi(h, k, l, p, q); empty -> product of annular weights
  double budget = kDefaultTermBudget;
};

/// phi(h, k, l, p, q) = omega(H; h) omega(K; k) omega(L; l) omega(P; p) omega(Q; q).
inline FiveFoldWeight annular_product_weight(double H, double K, double L, double P, double Q) {
  return [=](GaussianInt h, GaussianInt k, GaussianInt l, GaussianInt p, GaussianInt q) {
    auto w = [](double Z, GaussianInt z) { return annular_value(Z, Complex(double(z.re), double(z.im))); };
    return w(H, h) * w(K, k) * w(L, l) * w(P, p) * w(Q, q);
  };
}

/// PQHK (L sum |Upsilon_l|^2)^{1/2}.
inline double r_sum_trivial_bound(const AggregateSpec& spec) {
  double u2 = 0;
  for (const auto& l : detail::shell(spec.L / 2, spec.L)) u2 += std::norm(spec.upsilon(l));
  return spec.P * spec.Q * spec.H * spec.K * std::sqrt(spec.L * u2);
}

/// R = sum theta_p |p|^-2 |q|^-2 phi_h S(hk, l; pq) phi(h, k, l, p, q) Upsilon_l, by
/// direct nested loops and by grouping (p, q) on c = pq with cached S(hk, l; c).
inline AggregateResult r_sum(const AggregateSpec& spec) {
  const FiveFoldWeight w =
      spec.weight ? spec.weight : annular_product_weight(spec.H, spec.K, spec.L, spec.P, spec.Q);
  const auto hs = detail::shell(spec.H / 2, spec.H), ks = detail::shell(spec.K / 2, spec.K);
  const auto ls = detail::shell(spec.L / 2, spec.L), pset = detail::shell(spec.P / 2, spec.P);
  const auto qset = detail::shell(spec.Q / 2, spec.Q);

  AggregateResult res;
  for (const auto& p : pset)
    for (const auto& q : qset)
      for (const auto& h : hs)
        for (const auto& k : ks)
          for (const auto& l : ls)
            if (w(h, k, l, p, q) != 0) res.terms += double(norm(p * q));
  detail::check_budget(res.terms, spec.budget);

  for (const auto& p : pset) {
    const Complex tp = spec.theta(p) / double(norm(p));
    for (const auto& q : qset) {
      const double iq = 1.0 / double(norm(q));
      for (const auto& h : hs) {
        const Complex ph = spec.phi_h(h);
        for (const auto& k : ks)
          for (const auto& l : ls) {
            const double f = w(h, k, l, p, q);
            if (f == 0) continue;
            res.value += tp * iq * ph * kloosterman(h * k, l, p * q).value * f * spec.upsilon(l);
          }
      }
    }
  }

  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::pair<GaussianInt, GaussianInt>>> by_c;
  for (const auto& p : pset)
    for (const auto& q : qset) {
      const GaussianInt c = p * q;
      by_c[{c.re, c.im}].emplace_back(p, q);
    }
  KloostermanCache cache;
  for (const auto& [key, pairs] : by_c) {
    const GaussianInt c{key.first, key.second};
    for (const auto& l : ls) {
      const Complex ul = spec.upsilon(l);
      for (const auto& h : hs)
        for (const auto& k : ks) {
          Complex weight_sum = 0;
          for (const auto& [p, q] : pairs) {
            const double f = w(h, k, l, p, q);
            if (f != 0) weight_sum += spec.theta(p) / double(norm(p) * norm(q)) * f;
          }
          if (weight_sum == Complex(0)) continue;
          res.alternate += weight_sum * spec.phi_h(h) * ul * cache(h * k, l, c);
        }
    }
  }
  res.defect = std::abs(res.value - res.alternate) / std::max(1.0, std::abs(res.value));
  res.trivial = r_sum_trivial_bound(spec);
  res.ratio = res.trivial > 0 ? std::abs(res.value) / res.trivial : 0.0;
  return res;
}

// ---------------------------------------------------------------------------
// Level sum and the smooth bilinear sum.

struct LevelSumResult {
  Complex value;
  std::size_t visited = 0;  // moduli c whose argument lies in supp f
  double c_norm_lo = 0;     // window for |c|^2
  double c_norm_hi = 0;
};

/// sum_{c in qO - {0}} S(m, n; c) / |c|^2 f(2 pi sqrt(mn) / c) for radial f,
/// visiting only c with 2 pi |sqrt(mn) / c| in supp f.
inline LevelSumResult level_sum(GaussianInt m, GaussianInt n, GaussianInt q, const RadialWeight& f) {
  if (is_zero(q) || is_zero(m) || is_zero(n)) throw std::domain_error("gsk: level_sum needs m, n, q != 0");
  LevelSumResult res;
  const double lo = f.r_lo(), hi = f.r_hi();
  if (!(hi > 0)) return res;
  // |arg| = 2 pi sqrt|mn| / |c| in [lo, hi]  <=>  |c|^2 in [A / hi^2, A / lo^2].
  const double A = 4 * std::numbers::pi * std::numbers::pi * std::sqrt(double(norm(m)) * double(norm(n)));
  res.c_norm_lo = A / (hi * hi);
  res.c_norm_hi = lo > 0 ? A / (lo * lo) : std::numeric_limits<double>::infinity();
  if (!std::isfinite(res.c_norm_hi)) throw std::domain_error("gsk: level_sum needs f supported away from 0");
  const double qn = double(norm(q));
  // c = q t with |t|^2 in the window divided by |q|^2.
  for (const auto& t : detail::shell(std::max(0.0, std::floor(res.c_norm_lo / qn) - 1), std::ceil(res.c_norm_hi / qn))) {
    const GaussianInt c = q * t;
    const double cn = double(norm(c));
    const double arg = std::sqrt(A / cn);
    if (arg < lo || arg > hi) continue;
    ++res.visited;
    const Complex fv = f.eval(arg);
    if (fv == Complex(0)) continue;
    res.value += kloosterman(m, n, c).value / cn * fv;
  }
  return res;
}

struct BilinearResult {
  Complex sum;
  double trivial = 0;   // sum of |terms|
  double envelope = 0;  // HK + |c|^2 log H log K (1/delta + |u|)^8
  double ratio = 0;     // |sum| / trivial
};

/// sum_{H/2 < |h|^2 <= H} sum_{K/2 < |k|^2 <= K} alpha(h) beta(k) |hk|^{iu} S(h, k; c).
inline BilinearResult bilinear_ratio(const PointFn& alpha, const PointFn& beta, double H, double K, double delta,
                                     double u, GaussianInt c) {
  if (is_zero(c)) throw std::domain_error("gsk: bilinear_ratio needs c != 0");
  BilinearResult res;
  for (const auto& h : detail::shell(H / 2, H)) {
    const Complex ah = alpha(h);
    if (ah == Complex(0)) continue;
    for (const auto& k : detail::shell(K / 2, K)) {
      const Complex bk = beta(k);
      if (bk == Complex(0)) continue;
      const double mod = std::sqrt(double(norm(h * k)));
      const Complex twist = std::polar(1.0, u * std::log(mod));
      const Complex term = ah * bk * twist * kloosterman(h, k, c).value;
      res.sum += term;
      res.trivial += std::abs(term);
    }
  }
  res.envelope = H * K + double(norm(c)) * std::log(H) * std::log(K) * std::pow(1 / delta + std::abs(u), 8);
  res.ratio = res.trivial > 0 ? std::abs(res.sum) / res.trivial : 0.0;
  return res;
}

}  // namespace gsk
