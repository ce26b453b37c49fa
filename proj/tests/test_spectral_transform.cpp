#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gsk/spectral_transform.hpp"

using gsk::Complex;
using gsk::SpectralPoint;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// J*_xi(z) summed term by term with no caching and Gamma from the standard library.
Complex j_star_real_order(double xi, Complex z) {
  Complex sum = 0, pw = 1;
  for (int m = 0; m < 80; ++m) {
    sum += pw / (std::tgamma(m + 1.0) * std::tgamma(xi + m + 1.0));
    pw *= -0.25 * z * z;
  }
  return sum;
}

}  // namespace

TEST(Pochhammer, Examples) {
  EXPECT_EQ(gsk::pochhammer(Complex(1.7, -2), 0), Complex(1));
  EXPECT_EQ(gsk::pochhammer(2.0, 3), Complex(24));
  EXPECT_EQ(gsk::pochhammer(0.0, 2), Complex(0));
  EXPECT_EQ(gsk::pochhammer(-3.0, 5), Complex(0));
  EXPECT_THROW(gsk::pochhammer(1.0, -1), std::domain_error);
  for (double a : {0.3, 2.5, 7.0})
    for (int m = 0; m < 6; ++m)
      EXPECT_NEAR(gsk::pochhammer(a, m).real(), std::tgamma(a + m) / std::tgamma(a), 1e-12 * std::tgamma(a + m));
}

TEST(ReciprocalGamma, EntireAndAccurate) {
  for (int n = 0; n <= 5; ++n) EXPECT_EQ(gsk::rgamma(Complex(-n)), Complex(0));
  for (double x : {-3.5, -0.5, 0.25, 1.0, 4.5, 12.0})
    EXPECT_NEAR(gsk::rgamma(x).real(), 1 / std::tgamma(x), 1e-13 * (1 + std::abs(1 / std::tgamma(x))));
  // 1/Gamma(z) ~ (-1)^n n! (z + n) near z = -n.
  EXPECT_NEAR(gsk::rgamma(-2.0 + 1e-8).real(), 2 * 1e-8, 1e-15);
}

TEST(MTransform, ZeroAndEnvelope) {
  EXPECT_EQ(gsk::m_transform(gsk::RadialWeight::zero(), 1.0).value, Complex(0));
  const auto phi = gsk::test_function_FX(16);
  const double b = phi.r_hi();
  const double mass =
      gsk::integrate([&](double r) { return std::abs(phi.eval(r)) / r; }, phi.r_lo(), phi.r_hi()).value.real();
  for (double sigma : {0.5, 1.0, 2.0, 4.0, 9.0}) {
    const double v = std::abs(gsk::m_transform(phi, sigma).value);
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, std::pow(b / 2, sigma) * mass * (1 + 1e-12)) << sigma;
  }
}

TEST(MTransform, DerivativeIdentity) {
  // (s)_j M phi(s) = (-2)^j M(phi^(j))(s + j).
  const std::vector<gsk::RadialWeight> bumps{gsk::test_function_FX(16), gsk::annular_weight(3.0)};
  for (const auto& phi : bumps)
    for (Complex s : {Complex(0.5), Complex(1.0), Complex(1.5, 1.0)})
      for (int j = 1; j <= 3; ++j) {
        const Complex lhs = gsk::pochhammer(s, j) * gsk::m_transform(phi, s).value;
        const Complex rhs = std::pow(-2.0, j) * gsk::m_transform_deriv(phi, j, s + double(j)).value;
        EXPECT_LE(std::abs(lhs - rhs), 1e-7 * std::max(1.0, std::abs(lhs))) << phi.name() << " s=" << s << " j=" << j;
      }
}

TEST(JStar, Examples) {
  EXPECT_NEAR(std::abs(gsk::j_star(2.5, 0.0) - gsk::rgamma(3.5)), 0, 1e-15);
  EXPECT_EQ(gsk::j_star(-1.0, 0.0), Complex(0));
  // First zero of J_0, located by bisection on the series itself.
  double lo = 2.0, hi = 3.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = (lo + hi) / 2;
    (gsk::j_star(0.0, mid).real() > 0 ? lo : hi) = mid;
  }
  EXPECT_NEAR(lo, 2.404826, 1e-6);
  EXPECT_NEAR(std::abs(gsk::j_star(0.0, 2.404826)), 0, 1e-5);
}

TEST(JStar, MatchesBesselAndDirectSeries) {
  for (double x : {0.1, 1.0, 3.7, 8.0}) {
    EXPECT_NEAR(gsk::j_star(0.0, x).real(), std::cyl_bessel_j(0.0, x), 1e-12);
    // J*_xi(x) = (x/2)^{-xi} J_xi(x).
    EXPECT_NEAR(gsk::j_star(1.5, x).real(), std::pow(x / 2, -1.5) * std::cyl_bessel_j(1.5, x), 1e-12);
  }
  for (Complex z : {Complex(0.3, 0.2), Complex(-1.1, 2.0), Complex(4.0, -0.5)})
    for (double xi : {-2.5, -1.0, 0.0, 0.7, 3.0}) {
      const Complex ref = j_star_real_order(xi, z);
      EXPECT_LE(std::abs(gsk::j_star(xi, z) - ref), 1e-12 * (1 + std::abs(ref)));
      EXPECT_LE(std::abs(gsk::JStarSeries(xi)(z) - ref), 1e-12 * (1 + std::abs(ref)));
    }
}

TEST(CalK, Symmetry) {
  for (Complex nu : {Complex(0.3), Complex(0, 1.2), Complex(0.25, 0.5), Complex(0.0005), Complex(1.0)})
    for (int p : {0, 1, 3})
      for (Complex z : {Complex(0.4, 0.1), Complex(-1.3, 0.8), Complex(0.05, -0.2)}) {
        const Complex a = gsk::cal_K({nu, p}, z), b = gsk::cal_K({-nu, -p}, z);
        EXPECT_LE(std::abs(a - b), 1e-10 * (1 + std::abs(a))) << nu << " " << p << " " << z;
      }
  EXPECT_THROW(gsk::cal_K({0.3, 0}, 0.0), std::domain_error);
}

TEST(CalK, HalfIntegerOrderMatchesDirectAssembly) {
  // nu = 1/2, p = 0, z = x real: (|x/2|^{-1} J*_{-1/2}(x)^2 - |x/2| J*_{1/2}(x)^2) / sin(pi/2).
  for (double x : {0.2, 0.9, 2.5}) {
    const Complex jm = j_star_real_order(-0.5, x), jp = j_star_real_order(0.5, x);
    const Complex direct = jm * jm / (x / 2) - (x / 2) * jp * jp;
    EXPECT_LE(rel(gsk::cal_K({0.5, 0}, x), direct), 1e-12) << x;
    // In closed form: J*_{-1/2}(x) = cos x / sqrt(pi), J*_{1/2}(x) = 2 sin x / (x sqrt(pi)).
    const double closed = (2 / (kPi * x)) * (std::cos(x) * std::cos(x) - std::sin(x) * std::sin(x));
    EXPECT_NEAR(direct.real(), closed, 1e-12);
  }
}

TEST(CalK, LimitAtIntegerOrder) {
  for (Complex z : {Complex(0.7, 0.3), Complex(1.5, -0.4)}) {
    // Two-sided extrapolation from outside the bridging window.
    const Complex left = gsk::cal_K({-0.02, 0}, z), right = gsk::cal_K({0.02, 0}, z);
    const Complex limit = (left + right) / 2.0;
    EXPECT_LE(std::abs(gsk::cal_K({1e-4, 0}, z) - gsk::cal_K({0.0, 0}, z)), 1e-6);
    EXPECT_LE(std::abs(gsk::cal_K({0.0, 0}, z) - limit), 1e-3 * (1 + std::abs(limit)));
    // Continuity across the bridging threshold.
    const Complex inside = gsk::cal_K({0.999e-3, 0}, z), outside = gsk::cal_K({1.001e-3, 0}, z);
    EXPECT_LE(std::abs(inside - outside), 1e-6 * (1 + std::abs(inside)));
    const Complex at_one = gsk::cal_K({1.0, 2}, z), near_one = gsk::cal_K({1.0015, 2}, z);
    EXPECT_TRUE(std::isfinite(at_one.real()) && std::isfinite(at_one.imag()));
    EXPECT_LE(std::abs(at_one - near_one), 1e-2 * (1 + std::abs(at_one)));
  }
}

TEST(KTransform, ZeroWeight) {
  const auto r = gsk::k_transform_series(gsk::RadialWeight::zero(), {0.3, 0});
  EXPECT_EQ(r.value, Complex(0));
}

TEST(KTransform, SeriesSymmetry) {
  const auto phi = gsk::test_function_FX(16);
  for (Complex nu : {Complex(0.1), Complex(0, 1), Complex(0.2, 0.7)})
    for (int p : {0, 1, 2}) {
      const Complex a = gsk::k_transform_series(phi, {nu, p}).value;
      for (const SpectralPoint q : {SpectralPoint{-nu, p}, SpectralPoint{nu, -p}, SpectralPoint{-nu, -p}})
        EXPECT_LE(std::abs(gsk::k_transform_series(phi, q).value - a), 1e-10 * std::max(1.0, std::abs(a)));
    }
}

TEST(KTransform, SeriesMatchesQuadrature) {
  const auto phi = gsk::test_function_FX(16);
  for (const SpectralPoint pt : {SpectralPoint{0.1, 0}, SpectralPoint{0.2, 0}, SpectralPoint{Complex(0, 1), 0},
                                 SpectralPoint{Complex(0, 2), 1}, SpectralPoint{Complex(0, 1), 2}}) {
    const auto s = gsk::k_transform_series(phi, pt);
    const auto q = gsk::k_transform_quad(phi, pt);
    EXPECT_LE(rel(s.value, q.value), 1e-5) << pt.nu << " p=" << pt.p;
    EXPECT_GT(s.truncation_terms, 0);
    EXPECT_LE(s.est_error, 1e-8 * std::abs(s.value));
  }
}

TEST(KTransform, DecaysInP) {
  const auto phi = gsk::test_function_FX(16);
  const double k0 = std::abs(gsk::k_transform_series(phi, {Complex(0, 1), 0}).value);
  const double k6 = std::abs(gsk::k_transform_series(phi, {Complex(0, 1), 6}).value);
  EXPECT_LE(k6, 1e-3 * k0);
  const double q6 = std::abs(gsk::k_transform_quad(phi, {Complex(0, 1), 6}).value);
  EXPECT_LE(q6, 1e-3 * k0);
}

TEST(KTransform, AngularIntegralIsolatesOneMode) {
  for (Complex mu : {Complex(0.3), Complex(0, 1), Complex(-0.4, 0.6)})
    for (int k : {0, 1, -2, 3})
      for (double r : {0.2, 0.8, 1.7}) {
        const Complex quad = gsk::angular_integral_J(gsk::KernelJ(mu, k), r);
        const Complex mode = gsk::angular_mode_J(mu, k, r);
        EXPECT_LE(std::abs(quad - mode), 1e-12 * (1 + std::abs(mode))) << mu << " k=" << k << " r=" << r;
      }
}

TEST(BoundProfile, PositiveWindowAndMonotone) {
  const std::vector<double> nus{0.05, 0.1, 0.2, 0.3, 0.5}, Xs{4, 16, 64, 256, 1024, 4096};
  const auto t = gsk::bound_profile(nus, Xs);
  ASSERT_EQ(t.cells.size(), nus.size() * Xs.size());
  EXPECT_GT(t.r_min, 0.0);
  EXPECT_LE(t.r_max / t.r_min, 100.0);
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    EXPECT_GT(t.cells[i].k_value, 0.0);
    if (i % Xs.size() != 0) {
      EXPECT_GT(t.cells[i].k_value, t.cells[i - 1].k_value) << t.cells[i].nu << " " << t.cells[i].X;
    }
  }
  EXPECT_THROW(gsk::bound_profile({1.5}, {4}), std::domain_error);
  EXPECT_THROW(gsk::bound_profile({0.2}, {1}), std::domain_error);
}

TEST(BoundProfile, ImaginaryOrderUpperShape) {
  // (1 + t)^4 |K F_16(it, 0)| stays within a fixed multiple of its t = 1 value.
  const auto phi = gsk::test_function_FX(16);
  std::vector<double> norm;
  for (int t = 1; t <= 8; ++t)
    norm.push_back(std::pow(1.0 + t, 4) * std::abs(gsk::k_transform_series(phi, {Complex(0, t), 0}).value));
  for (double v : norm) {
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_LE(v, 100 * norm[0]);
  }
}
