#pragma once
// Fourier transforms on C with f^(w) = int f(z) e(-Re(w z)) dx dy, Poisson
// summation over Z[i], the distance to the nearest Gaussian integer, the
// Laplacian-transform identity, and the truncated dual expansion of sums of
// Kloosterman sums over an ideal.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "gsk/char_sums.hpp"
#include "gsk/quadrature.hpp"
#include "gsk/smooth_weights.hpp"
#include "gsk/zi_core.hpp"

namespace gsk {

inline constexpr double kEnvelopeFloor = 1e-13;

/// A smooth function on C. Either compactly supported in inner_radius <= |z| <=
/// support_radius, or bounded by envelope_amp exp(-envelope_rate |z|^2) outside
/// support_radius. Radial functions also carry their profile r -> f(r).
struct SmoothComplexFunction {
  std::string name;
  std::function<Complex(Complex)> eval;
  double support_radius = std::numeric_limits<double>::infinity();
  double inner_radius = 0;
  double envelope_amp = 0;
  double envelope_rate = 0;
  std::function<Complex(Complex)> laplacian_eval;  // L f = -(d_xx + d_yy) f, if known
  std::function<Complex(double)> radial;           // f(z) = radial(|z|), if radial

  Complex operator()(Complex z) const { return eval ? eval(z) : Complex{}; }
  bool compact() const { return std::isfinite(support_radius); }

  /// Radius beyond which |f| < kEnvelopeFloor.
  double effective_radius() const {
    if (compact()) return support_radius;
    if (!(envelope_rate > 0)) throw std::domain_error("gsk: non-compact function without a decay envelope");
    const double amp = std::max(envelope_amp, kEnvelopeFloor);
    return std::sqrt(std::max(0.0, std::log(amp / kEnvelopeFloor)) / envelope_rate);
  }

  static SmoothComplexFunction zero() {
    SmoothComplexFunction f;
    f.name = "zero";
    f.eval = [](Complex) { return Complex{}; };
    f.support_radius = 0;
    f.laplacian_eval = f.eval;
    f.radial = [](double) { return Complex{}; };
    return f;
  }
};

/// e^{-pi a |z|^2}; its transform is e^{-pi |w|^2 / a} / a.
inline SmoothComplexFunction gaussian(double a = 1.0) {
  if (!(a > 0)) throw std::domain_error("gsk: gaussian needs a > 0");
  const double pi = std::numbers::pi;
  SmoothComplexFunction f;
  f.name = "gaussian(" + std::to_string(a) + ")";
  f.radial = [a, pi](double r) { return Complex(std::exp(-pi * a * r * r)); };
  f.eval = [a, pi](Complex z) { return Complex(std::exp(-pi * a * std::norm(z))); };
  f.laplacian_eval = [a, pi](Complex z) {
    const double n = std::norm(z);
    return Complex((4 * pi * a - 4 * pi * pi * a * a * n) * std::exp(-pi * a * n));
  };
  f.envelope_amp = 1;
  f.envelope_rate = pi * a;
  return f;
}

/// z -> phi(|z|) for a compactly supported radial weight; the Laplacian comes
/// from jets: L f = -(phi'' + phi' / r).
inline SmoothComplexFunction radial_function(const RadialWeight& phi) {
  SmoothComplexFunction f;
  f.name = phi.name();
  f.support_radius = phi.r_hi();
  f.inner_radius = phi.r_lo();
  f.radial = [phi](double r) { return phi.eval(r); };
  f.eval = [phi](Complex z) { return phi.eval(std::abs(z)); };
  if (phi.exact_derivatives()) {
    f.laplacian_eval = [phi](Complex z) -> Complex {
      const double r = std::abs(z);
      if (!(r >= phi.r_lo() && r < phi.r_hi())) return 0.0;
      // phi'(r) / r -> phi''(0) at the origin.
      if (r < 1e-9) return -2.0 * phi.deriv(2, r);
      return -(phi.deriv(2, r) + phi.deriv(1, r) / r);
    };
  }
  return f;
}

/// z -> Phi(|z| / R), the standard bump scaled to the disc of radius R.
inline SmoothComplexFunction radial_bump(double R) {
  if (!(R > 0)) throw std::domain_error("gsk: radial_bump needs R > 0");
  SmoothComplexFunction f = radial_function(RadialWeight(
      0.0, R, [R](const RealJet& r) { return bump_phi(r * (1.0 / R)).cast<Complex>(); },
      "bump(|z|/" + std::to_string(R) + ")"));
  return f;
}

/// z -> Phi(c2 + c1 log |z|^2) with c1 > 0, supported where the argument lies in (-1, 1).
inline SmoothComplexFunction log_radial_bump(double c1, double c2) {
  if (!(c1 > 0)) throw std::domain_error("gsk: log_radial_bump needs c1 > 0");
  const double lo = std::exp((-1 - c2) / (2 * c1)), hi = std::exp((1 - c2) / (2 * c1));
  return radial_function(RadialWeight(
      lo, hi, [c1, c2](const RealJet& r) { return bump_phi(log(r * r) * c1 + c2).cast<Complex>(); },
      "Phi(" + std::to_string(c2) + " + " + std::to_string(c1) + " log|z|^2)"));
}

/// omega(Z; z) = Phi(1 + 2 log2(|z|^2 / Z)), nonzero for Z/2 < |z|^2 < Z.
inline SmoothComplexFunction annular_function(double Z) {
  if (!(Z > 0)) throw std::domain_error("gsk: annular_function needs Z > 0");
  const double c1 = 1 / std::numbers::ln2;
  SmoothComplexFunction f = log_radial_bump(2 * c1, 1 - 2 * c1 * std::log(Z));
  f.name = "omega(" + std::to_string(Z) + ")";
  return f;
}

// ---------------------------------------------------------------------------
// Transforms.

struct FourierValue {
  Complex value;
  double error = 0;
};

/// f^(w) by nested adaptive quadrature over the disc of effective support,
/// with panels no wider than 1 / (4 |w|).
inline FourierValue fourier_c(const SmoothComplexFunction& f, Complex w, QuadratureSpec quad = {}) {
  if (!f.eval) return {};
  const double R = f.effective_radius();
  if (!(R > 0)) return {};
  if (std::abs(w) > 0) quad.max_panel = std::min(quad.max_panel, 1 / (4 * std::abs(w)));
  // Absolute targets: the outer pass gets quad.abs_tolerance (default 1e-9) and
  // each inner pass a share small enough that its noise cannot stall the outer one.
  if (!(quad.abs_tolerance > 0)) quad.abs_tolerance = 1e-9;
  quad.tolerance = 1e-13;
  QuadratureSpec inner = quad;
  inner.abs_tolerance = quad.abs_tolerance / (20 * R);
  double err = 0;
  const double pi2 = 2 * std::numbers::pi;
  auto row = [&](double y) -> Complex {
    const double half = std::sqrt(std::max(0.0, R * R - y * y));
    if (std::abs(y) < f.inner_radius) {
      // Skip the hole of an annular support.
      const double gap = std::sqrt(f.inner_radius * f.inner_radius - y * y);
      auto g = [&](double x) { return f(Complex(x, y)) * std::polar(1.0, -pi2 * (w.real() * x - w.imag() * y)); };
      const auto a = integrate(g, -half, -gap, inner), b = integrate(g, gap, half, inner);
      err += a.error + b.error;
      return a.value + b.value;
    }
    const auto r = integrate(
        [&](double x) { return f(Complex(x, y)) * std::polar(1.0, -pi2 * (w.real() * x - w.imag() * y)); }, -half,
        half, inner);
    err += r.error;
    return r.value;
  };
  const auto outer = integrate(row, -R, R, quad);
  return {outer.value, outer.error + err};
}

/// Radial transform f^(rho) = 2 pi int phi(r) J0(2 pi rho r) r dr on a fixed
/// Gauss-Legendre grid fine enough for every rho <= rho_max.
class RadialFourier {
 public:
  RadialFourier(const SmoothComplexFunction& f, double rho_max) : rho_max_(rho_max) {
    if (!f.radial) throw std::domain_error("gsk: RadialFourier needs a radial function");
    const double lo = f.inner_radius, hi = f.effective_radius();
    if (!(hi > lo)) return;
    using GL = boost::math::quadrature::gauss<double, 20>;
    // At most eight radians of Bessel phase per 20-point panel, and at least
    // 16 panels so the profile itself is resolved.
    const double phase = 2 * std::numbers::pi * rho_max * (hi - lo);
    const int panels = std::max(16, static_cast<int>(std::ceil(phase / 8)));
    const double h = (hi - lo) / panels;
    const auto& xs = GL::abscissa();
    const auto& ws = GL::weights();
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + h * (p + 0.5);
      for (std::size_t k = 0; k < xs.size(); ++k) {
        for (double s : {-1.0, 1.0}) {
          if (xs[k] == 0 && s < 0) continue;
          const double r = mid + s * xs[k] * h / 2;
          const Complex v = f.radial(r);
          if (v == Complex(0)) continue;
          nodes_.push_back(r);
          coeffs_.push_back(v * (std::numbers::pi * r * ws[k] * h));
        }
      }
    }
  }

  Complex operator()(double rho) const {
    if (rho > rho_max_ * (1 + 1e-12)) throw std::domain_error("gsk: RadialFourier beyond its frequency range");
    Complex acc = 0;
    const double k = 2 * std::numbers::pi * rho;
    for (std::size_t i = 0; i < nodes_.size(); ++i) acc += coeffs_[i] * boost::math::cyl_bessel_j(0, k * nodes_[i]);
    return acc;
  }

  double rho_max() const { return rho_max_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  double rho_max_;
  std::vector<double> nodes_;
  std::vector<Complex> coeffs_;
};

/// The transform of a radial function as a radial function, valid for
/// |w| <= rho_max and taken as zero beyond.
inline SmoothComplexFunction radial_transform(const SmoothComplexFunction& f, double rho_max) {
  auto ft = std::make_shared<RadialFourier>(f, rho_max);
  SmoothComplexFunction g;
  g.name = "fourier(" + f.name + ")";
  g.support_radius = rho_max;
  g.radial = [ft](double rho) { return rho <= ft->rho_max() ? (*ft)(rho) : Complex{}; };
  g.eval = [ft](Complex w) { return std::abs(w) <= ft->rho_max() ? (*ft)(std::abs(w)) : Complex{}; };
  return g;
}

// ---------------------------------------------------------------------------
// Lattice sums.

/// ||beta||: distance from beta to the nearest Gaussian integer.
inline double nearest_distance(Complex beta) {
  const double x = beta.real() - std::round(beta.real()), y = beta.imag() - std::round(beta.imag());
  return std::hypot(x, y);
}

class CutoffError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

struct PoissonResult {
  Complex lhs, rhs;
  double defect = 0;
  double tail_estimate = 0;
  std::size_t lhs_terms = 0, rhs_terms = 0;
};

namespace detail {

// Tail of sum_{xi in O, |xi - c| > C} A exp(-b |xi - c|^2): each lattice point
// owns a unit square within 1/sqrt(2) of it.
inline double gaussian_lattice_tail(double amp, double rate, double C) {
  const double R = std::max(0.0, C - std::numbers::sqrt2 / 2);
  return amp * std::numbers::pi / rate * std::exp(-rate * R * R);
}

// Geometric extrapolation of the tail from the sums of |terms| on the last two
// unit shells below the cutoff.
inline double shell_tail(double inner, double outer) {
  if (outer == 0) return 0;
  if (inner > 0 && outer < 0.95 * inner) {
    const double q = outer / inner;
    return outer * q / (1 - q);
  }
  return 20 * outer;
}

template <class Fn>
void for_each_lattice_point_near(Complex centre, double radius, Fn&& fn) {
  const auto x0 = static_cast<std::int64_t>(std::floor(centre.real() - radius));
  const auto x1 = static_cast<std::int64_t>(std::ceil(centre.real() + radius));
  const auto y0 = static_cast<std::int64_t>(std::floor(centre.imag() - radius));
  const auto y1 = static_cast<std::int64_t>(std::ceil(centre.imag() + radius));
  for (std::int64_t x = x0; x <= x1; ++x)
    for (std::int64_t y = y0; y <= y1; ++y) {
      const double d = std::abs(Complex(double(x), double(y)) - centre);
      if (d <= radius) fn(GaussianInt{x, y}, d);
    }
}

}  // namespace detail

/// Both sides of sum_nu f(nu) e(Re(tau nu)) = sum_xi f^(xi - tau), each truncated
/// at distance `cutoff`. Throws CutoffError when the estimated truncation error
/// exceeds `tail_tolerance`.
inline PoissonResult poisson_check(const SmoothComplexFunction& f, Complex tau, double cutoff,
                                   double tail_tolerance = 1e-6) {
  PoissonResult out;
  if (!f.eval) return out;
  const double pi2 = 2 * std::numbers::pi;
  double tail = 0;

  const double lhs_radius = f.compact() ? std::min(cutoff, f.support_radius) : cutoff;
  if (!f.compact()) tail += detail::gaussian_lattice_tail(f.envelope_amp, f.envelope_rate, cutoff);
  if (f.compact() && cutoff < f.support_radius) throw CutoffError("gsk: cutoff inside the support of f");
  detail::for_each_lattice_point_near(0.0, lhs_radius, [&](GaussianInt nu, double) {
    const Complex z(double(nu.re), double(nu.im));
    const Complex v = f(z);
    if (v == Complex(0)) return;
    out.lhs += v * std::polar(1.0, pi2 * (tau * z).real());
    ++out.lhs_terms;
  });

  std::optional<RadialFourier> radial;
  if (f.radial) radial.emplace(f, cutoff);
  double shell_inner = 0, shell_outer = 0;
  detail::for_each_lattice_point_near(tau, cutoff, [&](GaussianInt xi, double d) {
    const Complex w = Complex(double(xi.re), double(xi.im)) - tau;
    const Complex v = radial ? (*radial)(d) : fourier_c(f, w).value;
    out.rhs += v;
    ++out.rhs_terms;
    if (d > cutoff - 1) shell_outer += std::abs(v);
    else if (d > cutoff - 2) shell_inner += std::abs(v);
  });
  if (radial) {
    // Radial transforms: the lattice tail is close to 2 pi int_C^{3C/2} rho |f^(rho)| d rho.
    const RadialFourier wide(f, 1.5 * cutoff);
    const int steps = std::max(64, static_cast<int>(std::ceil(cutoff * 20)));
    const double h = 0.5 * cutoff / steps;
    double acc = 0;
    for (int j = 0; j <= steps; ++j) {
      const double rho = cutoff + h * j;
      acc += ((j == 0 || j == steps) ? 0.5 : 1.0) * rho * std::abs(wide(rho));
    }
    tail += 2 * std::numbers::pi * h * acc;
  } else {
    tail += detail::shell_tail(shell_inner, shell_outer);
  }
  out.tail_estimate = tail;
  out.defect = std::abs(out.lhs - out.rhs);
  if (tail > tail_tolerance)
    throw CutoffError("gsk: Poisson cutoff too small (tail estimate " + std::to_string(tail) + ")");
  return out;
}

/// sum_xi |f^(xi - tau)| with the same truncation policy as poisson_check.
inline double absolute_dual_sum(const RadialFourier& ft, Complex tau) {
  double s = 0;
  detail::for_each_lattice_point_near(tau, ft.rho_max(), [&](GaussianInt, double d) { s += std::abs(ft(d)); });
  return s;
}

// ---------------------------------------------------------------------------
// Laplacian identity.

/// L f by the closed form when present, otherwise by fourth-order differences.
inline Complex laplacian(const SmoothComplexFunction& f, Complex z, double h = 2e-3) {
  if (f.laplacian_eval) return f.laplacian_eval(z);
  auto d2 = [&](Complex dir) {
    return (-f(z + 2.0 * h * dir) + 16.0 * f(z + h * dir) - 30.0 * f(z) + 16.0 * f(z - h * dir) -
            f(z - 2.0 * h * dir)) /
           (12 * h * h);
  };
  return -(d2(1.0) + d2(Complex(0, 1)));
}

struct IdentityCheck {
  Complex lhs, rhs;
  double defect = 0;
};

/// (L f)^(w) against |2 pi w|^2 f^(w).
inline IdentityCheck laplacian_transform_check(const SmoothComplexFunction& f, Complex w, QuadratureSpec quad = {}) {
  if (!f.eval) return {};
  SmoothComplexFunction lf;
  lf.name = "L " + f.name;
  lf.support_radius = f.support_radius;
  lf.inner_radius = f.inner_radius;
  const double R = f.compact() ? 0.0 : f.effective_radius();
  lf.envelope_amp = f.envelope_amp * 4 * f.envelope_rate * (1 + f.envelope_rate * R * R);
  lf.envelope_rate = f.envelope_rate;
  lf.eval = [f](Complex z) { return laplacian(f, z); };
  // Difference quotients carry noise near 1e-11, below which refinement stalls.
  if (!(quad.abs_tolerance > 0)) quad.abs_tolerance = 1e-7;
  IdentityCheck c;
  c.lhs = fourier_c(lf, w, quad).value;
  c.rhs = std::norm(2 * std::numbers::pi * w) * fourier_c(f, w, quad).value;
  c.defect = std::abs(c.lhs - c.rhs);
  return c;
}

// ---------------------------------------------------------------------------
// Dual expansion over an ideal.

/// Shape parameters of an annular weight: L^j f << (Delta |z|^2)^{-j} and
/// f(z) = 0 unless Omega1 / C < |z|^2 < C Omega1.
struct AnnularParams {
  double Delta = 1;
  double Omega1 = 1;
  double C = 2;
};

/// Parameters for omega(Z; .): Omega1 = Z / sqrt 2, C = 2, and Delta = (log 2 / 4)^2,
/// since L Phi(c2 + c1 log|z|^2) = -4 c1^2 Phi''(.) / |z|^2 with c1 = 2 / log 2.
inline AnnularParams annular_params(double Z) {
  const double delta = std::numbers::ln2 / 4;
  return {delta * delta, Z / std::numbers::sqrt2, 2.0};
}

struct DualExpansionResult {
  Complex direct, expansion;
  double defect = 0;
  double envelope = 0;       // Delta^{-1} |q|^4 / B^2
  std::size_t retained = 0;  // residues b kept by the ||b/q|| cut
  std::size_t surviving = 0; // of those, with c_q(b, h; k) != 0
};

/// direct = sum_{m == 0 mod d} f(m) S(h m / d, k; q);
/// expansion = sum_{b mod q, ||b/q||^2 <= B |d|^2 / (Delta Omega1)} c_q(b, h; k)
///             sum_{m == 0 mod d} f(m) e(Re(b m / (q d))).
inline DualExpansionResult dual_expansion_check(const SmoothComplexFunction& f, GaussianInt d, GaussianInt h,
                                                GaussianInt k, GaussianInt q, double B, const AnnularParams& prm) {
  if (is_zero(d) || is_zero(q)) throw std::domain_error("gsk: dual expansion needs d, q != 0");
  if (norm(q) > 20 || norm(d) > 8) throw std::domain_error("gsk: dual expansion is limited to |q|^2 <= 20, |d|^2 <= 8");
  if (!(B > 0) || !(prm.Delta > 0) || !(prm.Omega1 > 0) || !(prm.C > 1))
    throw std::domain_error("gsk: dual expansion needs B, Delta, Omega1 > 0 and C > 1");
  DualExpansionResult out;
  if (!f.eval || f.support_radius <= f.inner_radius) return out;
  const double lo2 = f.inner_radius * f.inner_radius, hi2 = f.support_radius * f.support_radius;
  if (!f.compact() || lo2 < prm.Omega1 / prm.C || hi2 > prm.C * prm.Omega1)
    throw std::domain_error("gsk: weight support outside (Omega1 / C, C Omega1)");

  // m = d n with n in the annulus scaled by |d|^2.
  std::vector<std::pair<GaussianInt, Complex>> terms;
  const double nd = static_cast<double>(norm(d));
  for_each_in_annulus(lo2 / nd - 1e-9, hi2 / nd, [&](GaussianInt n) {
    const GaussianInt m = d * n;
    const Complex v = f(Complex(double(m.re), double(m.im)));
    if (v != Complex(0)) terms.emplace_back(n, v);
  });

  for (const auto& [n, v] : terms) out.direct += v * kloosterman(h * n, k, q).value;

  const double cut = B * nd / (prm.Delta * prm.Omega1);
  const Complex qc(double(q.re), double(q.im));
  for (const auto& b : residues_mod(q)) {
    const double dist = nearest_distance(Complex(double(b.re), double(b.im)) / qc);
    if (dist * dist > cut) continue;
    ++out.retained;
    const Complex c = ramanujan_c_closed(q, b, h, k);
    if (std::abs(c) < 1e-12) continue;
    ++out.surviving;
    Complex inner = 0;
    for (const auto& [n, v] : terms) inner += v * e_re(b * n, q).value;
    out.expansion += c * inner;
  }
  out.defect = std::abs(out.direct - out.expansion);
  const double nq = static_cast<double>(norm(q));
  out.envelope = nq * nq / (prm.Delta * B * B);
  return out;
}

}  // namespace gsk
