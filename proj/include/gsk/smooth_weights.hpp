#pragma once
// Smooth compactly supported weights: the standard bump Phi(t) = exp(-1/(1-t^2)),
// its primitive X, the plateau weight Omega, annular weights omega(Z; z), the
// twisted radial functions Omega(X r^2) r^{2it} and the outline test function F_X.
//
// Every weight is evaluated on jets, so derivatives up to kJetOrder are exact
// chain-rule values rather than difference quotients.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>

#include "gsk/jet.hpp"

namespace gsk {

using Complex = std::complex<double>;

inline constexpr int kJetOrder = 6;
using RealJet = Jet<double, kJetOrder>;
using ComplexJet = Jet<Complex, kJetOrder>;

// ---------------------------------------------------------------------------
// Phi and its primitive.

inline double bump_phi(double t) {
  if (!(std::abs(t) < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

inline RealJet bump_phi(const RealJet& t) {
  if (!(std::abs(t.value()) < 1.0)) return RealJet{};
  return exp(-reciprocal(1.0 - t * t));
}

/// Phi^{(j)}(t) for j <= kJetOrder.
inline double bump_phi_deriv(int j, double t) {
  if (j < 0 || j > kJetOrder) throw std::domain_error("gsk: derivative order out of range");
  return bump_phi(RealJet::variable(t)).derivative(j);
}

namespace detail {

inline constexpr int kPrimitiveCells = 256;

inline double gauss_phi(double a, double b) {
  return boost::math::quadrature::gauss<double, 20>::integrate([](double x) { return bump_phi(x); }, a, b);
}

// X at the cell edges -1 + 2k / kPrimitiveCells.
inline const std::array<double, kPrimitiveCells + 1>& bump_cumulative() {
  static const auto table = [] {
    std::array<double, kPrimitiveCells + 1> t{};
    const double h = 2.0 / kPrimitiveCells;
    for (int k = 0; k < kPrimitiveCells; ++k) t[k + 1] = t[k] + gauss_phi(-1.0 + h * k, -1.0 + h * (k + 1));
    return t;
  }();
  return table;
}

}  // namespace detail

/// X(x) = integral of Phi over (-inf, x].
inline double bump_primitive(double x) {
  const auto& t = detail::bump_cumulative();
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return t[detail::kPrimitiveCells];
  const double h = 2.0 / detail::kPrimitiveCells;
  const int k = std::min(detail::kPrimitiveCells - 1, static_cast<int>((x + 1.0) / h));
  return t[k] + detail::gauss_phi(-1.0 + h * k, x);
}

inline RealJet bump_primitive(const RealJet& x) {
  const double x0 = x.value();
  const RealJet phi = bump_phi(RealJet::variable(x0));
  std::array<double, kJetOrder + 1> coeffs{};
  coeffs[0] = bump_primitive(x0);
  for (int k = 1; k <= kJetOrder; ++k) coeffs[k] = phi.c[k - 1] / k;
  return compose(coeffs, x);
}

/// X(1), the total mass of Phi.
inline double bump_mass() { return bump_primitive(1.0); }

// ---------------------------------------------------------------------------
// Profiles on (0, inf) and radial weights built from them.

/// A smooth real function of u > 0 supported in [lo, hi].
struct Profile {
  double lo = 0;
  double hi = 0;
  std::function<RealJet(const RealJet&)> fn;
  std::string name;

  double operator()(double u) const {
    if (!(u > lo && u < hi)) return 0.0;
    return fn(RealJet::constant(u)).value();
  }
  RealJet operator()(const RealJet& u) const {
    if (!(u.value() > lo && u.value() < hi)) return RealJet{};
    return fn(u);
  }
};

namespace detail {

inline RealJet log2_jet(const RealJet& u) { return log(u) * (1.0 / std::numbers::ln2); }

// Smooth step: 0 for y <= -1, 1 for y >= 1.
inline RealJet smooth_step(const RealJet& y) { return bump_primitive(y) * (1.0 / bump_mass()); }

}  // namespace detail

/// Omega(u) = Psi(log u / log 2), Psi(y) = (X(y + eta + 1) - X(y - eta - 1)) / X(1).
/// Supported in [2^{-eta-2}, 2^{eta+2}], identically 1 on [2^{-eta}, 2^{eta}].
inline Profile plateau_omega(double eta) {
  if (!(eta > 0)) throw std::domain_error("gsk: plateau_omega needs eta > 0");
  Profile p;
  p.lo = std::exp2(-eta - 2);
  p.hi = std::exp2(eta + 2);
  p.name = "plateau_omega(" + std::to_string(eta) + ")";
  p.fn = [eta](const RealJet& u) {
    const RealJet y = detail::log2_jet(u);
    return (bump_primitive(y + (eta + 1)) - bump_primitive(y - (eta + 1))) * (1.0 / bump_mass());
  };
  return p;
}

/// u -> Phi(1 + 2 log2 u): the annular profile, supported in (1/2, 1).
inline Profile annulus_profile() {
  Profile p;
  p.lo = 0.5;
  p.hi = 1.0;
  p.name = "annulus";
  p.fn = [](const RealJet& u) { return bump_phi(1.0 + 2.0 * detail::log2_jet(u)); };
  return p;
}

/// The outline's Phi_0: supported in [1/2, 2], values in [0, 1], identically 1 on
/// [3/4, 3/2]. Built in l = log2 u as a product of a rising smooth step on
/// [-1, log2(3/4)] and a falling one on [log2(3/2), 1].
inline Profile outline_phi0() {
  Profile p;
  p.lo = 0.5;
  p.hi = 2.0;
  p.name = "outline_phi0";
  p.fn = [](const RealJet& u) {
    const double a = std::log2(0.75), b = std::log2(1.5);
    const RealJet l = detail::log2_jet(u);
    const RealJet rise = (l + 1.0) * (2.0 / (a + 1.0)) - 1.0;
    const RealJet fall = (1.0 - l) * (2.0 / (1.0 - b)) - 1.0;
    return detail::smooth_step(rise) * detail::smooth_step(fall);
  };
  return p;
}

/// A radial test function r -> phi(r) on (0, inf), zero outside [r_lo, r_hi].
class RadialWeight {
 public:
  using JetFn = std::function<ComplexJet(const RealJet&)>;
  using ValueFn = std::function<Complex(double)>;

  RadialWeight() = default;

  /// Exact derivatives through jets.
  RadialWeight(double r_lo, double r_hi, JetFn fn, std::string name = "radial")
      : lo_(r_lo), hi_(r_hi), jet_(std::move(fn)), name_(std::move(name)) {
    if (!(r_hi >= r_lo) || r_lo < 0) throw std::domain_error("gsk: bad radial support");
  }

  /// Values only; derivatives fall back to central differences.
  static RadialWeight from_values(double r_lo, double r_hi, ValueFn fn, std::string name = "radial") {
    RadialWeight w;
    if (!(r_hi >= r_lo) || r_lo < 0) throw std::domain_error("gsk: bad radial support");
    w.lo_ = r_lo;
    w.hi_ = r_hi;
    w.value_ = std::move(fn);
    w.name_ = std::move(name);
    return w;
  }

  static RadialWeight zero() {
    return RadialWeight(1.0, 1.0, [](const RealJet&) { return ComplexJet{}; }, "zero");
  }

  double r_lo() const { return lo_; }
  double r_hi() const { return hi_; }
  const std::string& name() const { return name_; }
  bool exact_derivatives() const { return static_cast<bool>(jet_); }

  Complex eval(double r) const {
    if (!(r >= lo_ && r <= hi_)) return 0.0;
    if (jet_) return jet_(RealJet::constant(r)).value();
    return value_ ? value_(r) : Complex{};
  }
  Complex operator()(double r) const { return eval(r); }

  ComplexJet jet(double r) const {
    if (!(r >= lo_ && r <= hi_) || !jet_) return ComplexJet::constant(eval(r));
    return jet_(RealJet::variable(r));
  }

  /// phi^{(j)}(r).
  Complex deriv(int j, double r) const {
    if (j < 0) throw std::domain_error("gsk: negative derivative order");
    if (j == 0) return eval(r);
    if (!(r >= lo_ && r <= hi_)) return 0.0;
    if (jet_ && j <= kJetOrder) return jet_(RealJet::variable(r)).derivative(j);
    return central_difference(j, r);
  }

 private:
  Complex central_difference(int j, double r) const {
    // Symmetric j-th difference, one Richardson step (error O(h^4)); the step is
    // relative to r because the weights live on logarithmic scales.
    const double h = std::max(1e-12, std::min(r, hi_ - lo_) * std::pow(1e-16, 1.0 / (j + 4)));
    const Complex coarse = difference(j, r, h), fine = difference(j, r, h / 2);
    return (4.0 * fine - coarse) / 3.0;
  }

  Complex difference(int j, double r, double h) const {
    Complex acc = 0;
    double binom = 1;
    for (int k = 0; k <= j; ++k) {
      const double x = r + (0.5 * j - k) * h;
      acc += ((k % 2) ? -binom : binom) * eval(x);
      binom = binom * (j - k) / (k + 1);
    }
    return acc / std::pow(h, j);
  }

  double lo_ = 0, hi_ = 0;
  JetFn jet_;
  ValueFn value_;
  std::string name_;
};

/// phi(r) = Omega(X r^2) r^{2it} with supp phi inside [sqrt(lo/X), sqrt(hi/X)].
inline RadialWeight twisted_radial(const Profile& omega, double X, double t) {
  if (!(X > 0)) throw std::domain_error("gsk: twisted_radial needs X > 0");
  const double r_lo = std::sqrt(omega.lo / X), r_hi = std::sqrt(omega.hi / X);
  auto fn = [omega, X, t](const RealJet& r) -> ComplexJet {
    const RealJet w = omega(X * (r * r));
    ComplexJet out = w.cast<Complex>();
    if (t != 0.0) {
      const ComplexJet phase = exp(log(r).cast<Complex>() * Complex(0.0, 2.0 * t));
      out = out * phase;
    }
    return out;
  };
  return RadialWeight(r_lo, r_hi, std::move(fn), omega.name + "(X r^2) r^2it");
}

/// omega(Z; z) as a radial weight in r = |z|: nonzero only for Z/2 < r^2 < Z.
inline RadialWeight annular_weight(double Z) {
  if (!(Z > 0)) throw std::domain_error("gsk: annular_weight needs Z > 0");
  return twisted_radial(annulus_profile(), 1.0 / Z, 0.0);
}

/// omega(Z; z) evaluated at a complex point.
inline double annular_value(double Z, Complex z) {
  if (!(Z > 0)) throw std::domain_error("gsk: annular_weight needs Z > 0");
  return annulus_profile()(std::norm(z) / Z);
}

/// F_X(z) = Phi_0(X |z|^2) as a radial weight.
inline RadialWeight test_function_FX(double X) {
  if (!(X >= 2)) throw std::domain_error("gsk: F_X needs X >= 2");
  return twisted_radial(outline_phi0(), X, 0.0);
}

}  // namespace gsk
