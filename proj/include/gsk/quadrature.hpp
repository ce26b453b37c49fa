#pragma once
// Adaptive 1-D quadrature (Boost G7K15) with optional pre-splitting so that
// no panel spans more than a fixed length; used for oscillatory integrands.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace gsk {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureSpec {
  double tolerance = 1e-10;      // relative to the L1 norm of each panel
  double abs_tolerance = 0;      // absolute error target over [a, b]; 0 means relative only
  double max_panel = std::numeric_limits<double>::infinity();
  unsigned max_depth = 18;
  double error_ceiling = 1e-6;  // panel error estimates above this are reported as failures
};

struct QuadResult {
  std::complex<double> value;
  double error = 0;
};

namespace detail {

// Adaptive bisection on single G7K15 panels; a panel is accepted when its error
// estimate meets either the relative or its share of the absolute target.
template <class G>
void gk_adapt(G& g, double a, double b, double abs_budget, const QuadratureSpec& spec, unsigned depth,
              std::complex<double>& value, double& error, double& l1) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0, norm1 = 0;
  const std::complex<double> v = gauss_kronrod<double, 15>::integrate(g, a, b, 0, 0.0, &err, &norm1);
  if (err <= std::max(abs_budget, spec.tolerance * norm1) || depth >= spec.max_depth || !std::isfinite(err)) {
    value += v;
    error += err;
    l1 += norm1;
    return;
  }
  const double m = 0.5 * (a + b);
  gk_adapt(g, a, m, abs_budget / 2, spec, depth + 1, value, error, l1);
  gk_adapt(g, m, b, abs_budget / 2, spec, depth + 1, value, error, l1);
}

}  // namespace detail

template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  QuadResult out{0.0, 0.0};
  if (!(b > a)) return out;
  const double len = b - a;
  const long panels = std::max(1L, static_cast<long>(std::isfinite(spec.max_panel) ? std::ceil(len / spec.max_panel) : 1));
  const double h = len / static_cast<double>(panels);
  auto g = [&](double x) -> std::complex<double> { return std::complex<double>(f(x)); };
  for (long k = 0; k < panels; ++k) {
    const double lo = a + h * static_cast<double>(k);
    const double hi = (k + 1 == panels) ? b : lo + h;
    std::complex<double> v = 0;
    double err = 0, l1 = 0;
    // Relative targets cannot be met where the integrand decays into denormals, so
    // a floor tied to the panel's overall mass stops refinement there.
    double coarse_err = 0, coarse_l1 = 0;
    boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, lo, hi, 0, 0.0, &coarse_err, &coarse_l1);
    const double floor = std::isfinite(coarse_l1) ? 1e-4 * spec.tolerance * coarse_l1 : 0.0;
    detail::gk_adapt(g, lo, hi, std::max(spec.abs_tolerance * (hi - lo) / len, floor), spec, 0, v, err, l1);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalError("gsk: non-finite quadrature value on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    if (err > spec.error_ceiling && err > 1e-3 * l1)
      throw NumericalError("gsk: quadrature did not converge (error estimate " + std::to_string(err) + ")");
    out.value += v;
    out.error += err;
  }
  return out;
}

}  // namespace gsk
