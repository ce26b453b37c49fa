#pragma once
// The K-transform of radial test functions: M-transform, the kernels J*, cal J,
// cal K, the factorial series for Kf(nu, p), a polar-coordinate quadrature
// oracle, and the growth profile of K F_X(nu, 0).

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gsk/quadrature.hpp"
#include "gsk/smooth_weights.hpp"
#include "gsk/special.hpp"

namespace gsk {

struct SpectralPoint {
  Complex nu;
  int p = 0;
};

struct TransformResult {
  Complex value;
  int truncation_terms = 0;
  double est_error = 0;
};

inline constexpr double kNearIntegerRadius = 1e-3;

namespace detail {

// Offsets used to bridge the removable singularities at integer nu.
inline constexpr std::array<double, 4> kBridgeNodes{-4e-3, -2e-3, 2e-3, 4e-3};

// Nearest integer n with |nu - n| < kNearIntegerRadius, or nothing.
inline std::optional<double> near_integer(Complex nu) {
  const double n = std::round(nu.real());
  if (std::abs(nu - n) < kNearIntegerRadius) return n;
  return std::nullopt;
}

// Cubic Lagrange interpolation of g at nu = n + delta through n + kBridgeNodes.
template <class G>
auto bridge(double n, Complex delta, G&& g) {
  using R = decltype(g(Complex{}));
  R acc{};
  for (std::size_t j = 0; j < kBridgeNodes.size(); ++j) {
    Complex l = 1.0;
    for (std::size_t k = 0; k < kBridgeNodes.size(); ++k)
      if (k != j) l *= (delta - kBridgeNodes[k]) / (kBridgeNodes[j] - kBridgeNodes[k]);
    acc = acc + g(n + kBridgeNodes[j]) * l;
  }
  return acc;
}

}  // namespace detail

/// M phi(s) = int_0^inf phi(2 rho) rho^{s-1} d rho.
inline TransformResult m_transform(const RadialWeight& phi, Complex s, const QuadratureSpec& quad = {}) {
  const auto r = integrate(
      [&](double rho) { return phi.eval(2 * rho) * std::exp((s - 1.0) * std::log(rho)); }, phi.r_lo() / 2,
      phi.r_hi() / 2, quad);
  return {r.value, 0, r.error};
}

/// M(phi^{(j)})(s).
inline TransformResult m_transform_deriv(const RadialWeight& phi, int j, Complex s, const QuadratureSpec& quad = {}) {
  const auto r = integrate(
      [&](double rho) { return phi.deriv(j, 2 * rho) * std::exp((s - 1.0) * std::log(rho)); }, phi.r_lo() / 2,
      phi.r_hi() / 2, quad);
  return {r.value, 0, r.error};
}

/// cal J_{mu,k}(z) = |z/2|^{2 mu} (z/|z|)^{-2k} J*_{mu-k}(z) J*_{mu+k}(conj z).
class KernelJ {
 public:
  KernelJ(Complex mu, int k) : mu_(mu), k_(k), lower_(mu - double(k)), upper_(mu + double(k)) {}

  Complex operator()(Complex z) const {
    const double r = std::abs(z);
    if (r == 0) throw std::domain_error("gsk: kernel at z = 0");
    const Complex radial = std::exp(2.0 * mu_ * std::log(r / 2));
    const Complex angular = std::polar(1.0, -2.0 * k_ * std::arg(z));
    return radial * angular * lower_(z) * upper_(std::conj(z));
  }

 private:
  Complex mu_;
  int k_;
  JStarSeries lower_, upper_;
};

/// cal K_{nu,p}(z) = (cal J_{-nu,-p}(z) - cal J_{nu,p}(z)) / sin(pi nu); within
/// kNearIntegerRadius of an integer the removable singularity is bridged by
/// cubic interpolation through nu = n +- 2e-3, n +- 4e-3.
class KernelK {
 public:
  explicit KernelK(SpectralPoint pt) : pt_(pt) {
    if (auto n = detail::near_integer(pt.nu)) {
      n_ = *n;
      for (double d : detail::kBridgeNodes) parts_.push_back(Part(n_ + d, pt.p));
    } else {
      parts_.push_back(Part(pt.nu, pt.p));
    }
  }

  Complex operator()(Complex z) const {
    if (z == Complex(0)) throw std::domain_error("gsk: cal_K at z = 0");
    if (parts_.size() == 1) return parts_[0](z);
    std::size_t idx = 0;
    return detail::bridge(n_, pt_.nu - n_, [&](Complex) { return parts_[idx++](z); });
  }

 private:
  struct Part {
    Part(Complex nu, int p) : minus(-nu, -p), plus(nu, p), inv_sin(1.0 / std::sin(std::numbers::pi * nu)) {}
    Complex operator()(Complex z) const { return (minus(z) - plus(z)) * inv_sin; }
    KernelJ minus, plus;
    Complex inv_sin;
  };
  SpectralPoint pt_;
  double n_ = 0;
  std::vector<Part> parts_;
};

inline Complex cal_K(SpectralPoint pt, Complex z) { return KernelK(pt)(z); }

namespace detail {

inline TransformResult k_series_regular(const RadialWeight& phi, Complex nu, int k, const QuadratureSpec& quad) {
  const Complex inv_sin = 1.0 / std::sin(std::numbers::pi * nu);
  const double sign = (k % 2) ? -1.0 : 1.0;
  Complex sum = 0;
  double err = 0, fact_m = 1, fact_mk = 1;
  for (int j = 1; j <= k; ++j) fact_mk *= j;
  int stable = 0;
  for (int m = 0; m < 200; ++m) {
    if (m > 0) {
      fact_m *= m;
      fact_mk *= m + k;
    }
    const double mm = m, kk = k;
    const auto minus = m_transform(phi, -2.0 * nu + 4 * mm + 2 * kk, quad);
    const auto plus = m_transform(phi, 2.0 * nu + 4 * mm + 2 * kk, quad);
    const Complex km = sign * inv_sin *
                       (minus.value * rgamma(-nu + mm + 1.0) * rgamma(-nu + mm + 1.0 + kk) -
                        plus.value * rgamma(nu + mm + 1.0) * rgamma(nu + mm + 1.0 + kk));
    const Complex term = 2 * std::numbers::pi * km / (fact_m * fact_mk);
    sum += term;
    err += 2 * std::numbers::pi * std::abs(inv_sin) / (fact_m * fact_mk) *
           (minus.est_error * std::abs(rgamma(-nu + mm + 1.0) * rgamma(-nu + mm + 1.0 + kk)) +
            plus.est_error * std::abs(rgamma(nu + mm + 1.0) * rgamma(nu + mm + 1.0 + kk)));
    // Terms decay factorially; two consecutive negligible terms end the sum and
    // twice the last one bounds the tail.
    if (std::abs(term) <= 1e-16 * std::abs(sum) || term == Complex(0)) {
      if (++stable == 2) return {sum, m + 1, err + 2 * std::abs(term)};
    } else {
      stable = 0;
    }
  }
  throw NumericalError("gsk: K-transform series did not converge");
}

}  // namespace detail

/// Kf(nu, p) for f(z) = phi(|z|) through the factorial series in M-transforms.
inline TransformResult k_transform_series(const RadialWeight& phi, SpectralPoint pt, const QuadratureSpec& quad = {}) {
  const int k = std::abs(pt.p);
  if (auto n = detail::near_integer(pt.nu)) {
    int terms = 0;
    double err = 0;
    const Complex v = detail::bridge(*n, pt.nu - *n, [&](Complex nu) {
      const auto r = detail::k_series_regular(phi, nu, k, quad);
      terms = std::max(terms, r.truncation_terms);
      err += r.est_error;
      return r.value;
    });
    return {v, terms, err};
  }
  return detail::k_series_regular(phi, pt.nu, k, quad);
}

/// Angular integral of cal K_{nu,p}(r e^{i theta}) over [0, 2 pi) by the
/// trapezoid rule (spectrally exact for these trigonometric series).
inline Complex angular_integral(const KernelK& kernel, double r, int nodes = 64) {
  Complex acc = 0;
  const double h = 2 * std::numbers::pi / nodes;
  for (int j = 0; j < nodes; ++j) acc += kernel(std::polar(r, h * j));
  return acc * h;
}

inline Complex angular_integral_J(const KernelJ& kernel, double r, int nodes = 64) {
  Complex acc = 0;
  const double h = 2 * std::numbers::pi / nodes;
  for (int j = 0; j < nodes; ++j) acc += kernel(std::polar(r, h * j));
  return acc * h;
}

/// The surviving mode of the angular integral of cal J_{mu,k}(r e^{i theta}):
/// 2 pi sum_m (-1)^k (r/2)^{2(mu+2m+|k|)} / (m! (m+|k|)! Gamma(mu+m+1) Gamma(mu+m+|k|+1)).
inline Complex angular_mode_J(Complex mu, int k, double r) {
  const int ak = std::abs(k);
  Complex sum = 0;
  double fm = 1, fmk = 1;
  for (int j = 1; j <= ak; ++j) fmk *= j;
  for (int m = 0; m < 60; ++m) {
    if (m > 0) {
      fm *= m;
      fmk *= m + ak;
    }
    const Complex t = ((ak % 2) ? -1.0 : 1.0) * std::exp(2.0 * (mu + 2.0 * m + double(ak)) * std::log(r / 2)) *
                      rgamma(mu + double(m) + 1.0) * rgamma(mu + double(m + ak) + 1.0) / (fm * fmk);
    sum += t;
    if (m > 2 && std::abs(t) < 1e-18 * std::abs(sum)) break;
  }
  return 2 * std::numbers::pi * sum;
}

/// Kf(nu, p) = int_0^inf int_0^{2pi} cal K(r e^{i theta}) phi(r) d theta dr / r.
inline TransformResult k_transform_quad(const RadialWeight& phi, SpectralPoint pt, QuadratureSpec quad = {}) {
  const KernelK kernel(pt);
  // The angular sums carry rounding noise near 1e-16 of the kernel size, which
  // stalls refinement below about 1e-9 relative to the L1 norm.
  quad.tolerance = std::max(quad.tolerance, 1e-9);
  quad.max_depth = std::min(quad.max_depth, 12u);
  const auto r = integrate(
      [&](double rr) -> Complex {
        const Complex f = phi.eval(rr);
        if (f == Complex(0)) return 0.0;
        return f * angular_integral(kernel, rr) / rr;
      },
      phi.r_lo(), phi.r_hi(), quad);
  return {r.value, 0, r.error};
}

// ---------------------------------------------------------------------------
// Growth profile of K F_X(nu, 0).

struct ProfileCell {
  double nu = 0;
  double X = 0;
  double k_value = 0;     // K F_X(nu, 0)
  double normaliser = 0;  // min{1 + |log X|, 1/nu} X^nu int phi dr / r
  double ratio = 0;
};

struct ProfileTable {
  std::vector<ProfileCell> cells;
  double r_min = 0, r_max = 0;
};

/// r(nu, X) = K F_X(nu, 0) / (min{1 + |log X|, 1/nu} X^nu int F_X dr / r) on a grid
/// of real 0 < nu < 1 and X >= 2.
inline ProfileTable bound_profile(const std::vector<double>& nu_grid, const std::vector<double>& X_grid) {
  ProfileTable t;
  t.r_min = std::numeric_limits<double>::infinity();
  t.r_max = 0;
  for (double nu : nu_grid) {
    if (!(nu > 0 && nu < 1)) throw std::domain_error("gsk: bound_profile needs 0 < nu < 1");
    for (double X : X_grid) {
      const RadialWeight phi = test_function_FX(X);
      ProfileCell c;
      c.nu = nu;
      c.X = X;
      c.k_value = k_transform_series(phi, {nu, 0}).value.real();
      const double mass = integrate([&](double r) { return phi.eval(r) / r; }, phi.r_lo(), phi.r_hi()).value.real();
      c.normaliser = std::min(1 + std::abs(std::log(X)), 1 / nu) * std::pow(X, nu) * mass;
      c.ratio = c.k_value / c.normaliser;
      t.r_min = std::min(t.r_min, c.ratio);
      t.r_max = std::max(t.r_max, c.ratio);
      t.cells.push_back(c);
    }
  }
  return t;
}

}  // namespace gsk
