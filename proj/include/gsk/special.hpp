#pragma once
// Entire reciprocal Gamma, Pochhammer symbols and the normalised Bessel
// series J*_xi(z) = sum_m (-1)^m (z/2)^{2m} / (m! Gamma(xi + m + 1)).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace gsk {

using Complex = std::complex<double>;

namespace detail {

// Lanczos approximation, g = 7, n = 9 (Numerical Recipes / Godfrey coefficients).
inline Complex lanczos_log_gamma(Complex z) {
  static constexpr std::array<double, 9> p{0.99999999999980993,  676.5203681218851,    -1259.1392167224028,
                                           771.32342877765313,   -176.61502916214059,  12.507343278686905,
                                           -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  z -= 1.0;
  Complex x = p[0];
  for (int i = 1; i < 9; ++i) x += p[static_cast<std::size_t>(i)] / (z + static_cast<double>(i));
  const Complex t = z + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace detail

/// 1 / Gamma(z), entire: zero at z = 0, -1, -2, ... and never formed as a quotient near a pole.
inline Complex rgamma(Complex z) {
  const double pi = std::numbers::pi;
  if (z.real() < 0.5) {
    // 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi
    const double rz = z.real();
    if (z.imag() == 0.0 && rz == std::round(rz)) return 0.0;
    return std::sin(pi * z) * std::exp(detail::lanczos_log_gamma(1.0 - z)) / pi;
  }
  return std::exp(-detail::lanczos_log_gamma(z));
}

/// (alpha)_m = alpha (alpha + 1) ... (alpha + m - 1).
inline Complex pochhammer(Complex alpha, int m) {
  if (m < 0) throw std::domain_error("gsk: pochhammer needs m >= 0");
  Complex p = 1.0;
  for (int k = 0; k < m; ++k) p *= alpha + static_cast<double>(k);
  return p;
}

/// J*_xi(z) with coefficients rgamma(xi + m + 1) / m! cached for a fixed order.
class JStarSeries {
 public:
  explicit JStarSeries(Complex xi, int terms = 48) : xi_(xi) {
    coeffs_.reserve(static_cast<std::size_t>(terms));
    double fact = 1.0;
    for (int m = 0; m < terms; ++m) {
      if (m > 0) fact *= m;
      coeffs_.push_back(rgamma(xi + static_cast<double>(m + 1)) / fact);
    }
  }

  Complex operator()(Complex z) const {
    const Complex w = -0.25 * z * z;
    Complex sum = 0.0, pw = 1.0;
    double peak = 0.0;
    for (std::size_t m = 0; m < coeffs_.size(); ++m) {
      const Complex term = coeffs_[m] * pw;
      sum += term;
      peak = std::max(peak, std::abs(term));
      if (m > 4 && std::abs(term) <= 1e-18 * std::max(peak, 1e-300) && std::abs(pw) < 1.0) break;
      pw *= w;
    }
    return sum;
  }

  Complex order() const { return xi_; }

 private:
  Complex xi_;
  std::vector<Complex> coeffs_;
};

inline Complex j_star(Complex xi, Complex z) {
  const Complex w = -0.25 * z * z;
  Complex sum = 0.0, pw = 1.0;
  double fact = 1.0, peak = 0.0;
  for (int m = 0; m < 400; ++m) {
    if (m > 0) {
      fact *= m;
      pw *= w;
    }
    const Complex term = pw / fact * rgamma(xi + static_cast<double>(m + 1));
    sum += term;
    peak = std::max(peak, std::abs(term));
    if (m > std::abs(z) + std::abs(xi) && std::abs(pw) / fact <= 1e-18 * std::max(peak, 1e-300)) break;
  }
  return sum;
}

}  // namespace gsk
