#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "gsk/smooth_weights.hpp"

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int k = 0; k < n; ++k) g.push_back(lo * std::pow(hi / lo, k / double(n - 1)));
  return g;
}

}  // namespace

TEST(BumpPhi, Examples) {
  EXPECT_NEAR(gsk::bump_phi(0.0), std::exp(-1.0), 1e-16);
  EXPECT_EQ(gsk::bump_phi(1.0), 0.0);
  EXPECT_EQ(gsk::bump_phi(-1.0), 0.0);
  EXPECT_NEAR(gsk::bump_phi(0.5), std::exp(-4.0 / 3.0), 1e-16);
  for (double t = -1.5; t <= 1.5; t += 0.01) {
    EXPECT_GE(gsk::bump_phi(t), 0.0);
    EXPECT_LE(gsk::bump_phi(t), std::exp(-1.0) + 1e-16);
  }
}

TEST(BumpPhi, JetDerivativesMatchClosedForm) {
  // Phi' = -2t/(1-t^2)^2 Phi,  Phi'' = (6t^4 - 2) / (1-t^2)^4 Phi.
  for (double t : {-0.9, -0.3, 0.0, 0.2, 0.7}) {
    const double s = 1 - t * t;
    EXPECT_NEAR(gsk::bump_phi_deriv(1, t), -2 * t / (s * s) * gsk::bump_phi(t), 1e-12);
    EXPECT_NEAR(gsk::bump_phi_deriv(2, t), (6 * std::pow(t, 4) - 2) / std::pow(s, 4) * gsk::bump_phi(t), 1e-10);
  }
  EXPECT_EQ(gsk::bump_phi_deriv(3, 1.2), 0.0);
  EXPECT_THROW(gsk::bump_phi_deriv(gsk::kJetOrder + 1, 0.0), std::domain_error);
}

TEST(BumpPrimitive, MatchesIndependentQuadrature) {
  boost::math::quadrature::tanh_sinh<double> ts;
  EXPECT_EQ(gsk::bump_primitive(-1.0), 0.0);
  EXPECT_EQ(gsk::bump_primitive(-3.0), 0.0);
  for (double x : {-0.95, -0.5, -0.1, 0.0, 0.33, 0.8, 0.999, 1.0}) {
    const double ref = ts.integrate([](double t) { return gsk::bump_phi(t); }, -1.0, x);
    EXPECT_NEAR(gsk::bump_primitive(x), ref, 1e-14) << x;
  }
  EXPECT_NEAR(gsk::bump_mass(), 0.44399381616807943, 1e-14);
  EXPECT_GT(gsk::bump_mass(), 0.0);
}

TEST(PlateauOmega, Examples) {
  const auto om = gsk::plateau_omega(1.0);
  EXPECT_EQ(om(1.0), 1.0);
  EXPECT_EQ(om(std::exp2(3.0) + 1), 0.0);
  EXPECT_THROW(gsk::plateau_omega(0.0), std::domain_error);
  EXPECT_THROW(gsk::plateau_omega(-1.0), std::domain_error);
}

TEST(PlateauOmega, SupportAndPlateauOnFineGrid) {
  const double eta = 4.0;
  const auto om = gsk::plateau_omega(eta);
  for (double u : log_grid(std::exp2(-8), std::exp2(8), 1000)) {
    const double v = om(u);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0 + 1e-15);
    if (u <= std::exp2(-6) || u >= std::exp2(6)) {
      EXPECT_EQ(v, 0.0) << u;
    }
    if (u >= std::exp2(-4) && u <= std::exp2(4)) {
      EXPECT_NEAR(v, 1.0, 1e-15) << u;
    }
  }
}

TEST(AnnularWeight, Examples) {
  const auto w = gsk::annular_weight(4.0);
  EXPECT_EQ(w.eval(std::sqrt(2.0)), 0.0);
  EXPECT_GT(w.eval(std::sqrt(4.0 * std::pow(2.0, -0.5))).real(), 0.25);
  EXPECT_EQ(gsk::annular_value(4.0, 0.0), 0.0);
  EXPECT_THROW(gsk::annular_weight(0.0), std::domain_error);
}

TEST(AnnularWeight, SupportPlateauAndRange) {
  for (double Z : {1.0, 4.0, 37.5}) {
    for (double n2 : log_grid(Z / 4, 2 * Z, 2000)) {
      const double v = gsk::annular_value(Z, std::sqrt(n2));
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, std::exp(-1.0) + 1e-16);
      if (n2 <= Z / 2 || n2 >= Z) {
        EXPECT_EQ(v, 0.0);
      }
      if (n2 >= std::pow(2.0, -0.75) * Z && n2 <= std::pow(2.0, -0.25) * Z) {
        EXPECT_GT(v, 0.25);
      }
    }
  }
}

TEST(TwistedRadial, Examples) {
  const double X = 9.0, B = std::exp2(3.0);
  const auto om = gsk::plateau_omega(1.0);
  const auto phi0 = gsk::twisted_radial(om, X, 0.0);
  EXPECT_NEAR(phi0.eval(1 / std::sqrt(X)).real(), 1.0, 1e-15);
  EXPECT_NEAR(phi0.eval(0.4).imag(), 0.0, 0.0);
  const auto phi5 = gsk::twisted_radial(om, X, 5.0);
  for (double r : {0.1, 0.2, 0.33, 0.5, 0.9})
    EXPECT_NEAR(std::abs(phi5.eval(r)), om(X * r * r), 1e-14);
  EXPECT_EQ(phi5.eval(2 * std::sqrt(B) / std::sqrt(X)), 0.0);
  EXPECT_LE(phi5.r_hi(), std::sqrt(B / X) + 1e-15);
  EXPECT_GE(phi5.r_lo(), 1 / std::sqrt(B * X) - 1e-15);
  EXPECT_THROW(gsk::twisted_radial(om, 0.0, 1.0), std::domain_error);
}

TEST(TwistedRadial, JetDerivativesAgreeWithDifferences) {
  const auto phi = gsk::twisted_radial(gsk::plateau_omega(0.5), 4.0, 1.5);
  const auto fd = gsk::RadialWeight::from_values(phi.r_lo(), phi.r_hi(), [&](double r) { return phi.eval(r); });
  for (double r : {0.25, 0.31, 0.5, 0.77}) {
    for (int j = 1; j <= 3; ++j) {
      const gsk::Complex a = phi.deriv(j, r), b = fd.deriv(j, r);
      EXPECT_LE(std::abs(a - b), 1e-4 * (1 + std::abs(a))) << "j=" << j << " r=" << r;
    }
  }
}

TEST(TwistedRadial, DerivativeBoundShape) {
  // c_j(t) = max_r |r^j phi^(j)(r)| / (1+t)^j must not grow with t.
  const double X = 16.0;
  const auto om = gsk::plateau_omega(1.0);
  for (int j = 1; j <= 3; ++j) {
    std::vector<double> c;
    for (double t : {0.0, 1.0, 5.0}) {
      const auto phi = gsk::twisted_radial(om, X, t);
      double m = 0;
      for (double r : log_grid(phi.r_lo(), phi.r_hi(), 400)) m = std::max(m, std::pow(r, j) * std::abs(phi.deriv(j, r)));
      c.push_back(m / std::pow(1 + t, j));
    }
    EXPECT_GT(c[0], 0.0);
    for (double v : c) EXPECT_LE(v, 2.0 * c[0]) << "j=" << j;
  }
}

TEST(TestFunctionFX, Examples) {
  const double X = 16.0;
  const auto F = gsk::test_function_FX(X);
  EXPECT_EQ(F.eval(std::sqrt(0.25 / X)), 0.0);
  EXPECT_NEAR(F.eval(std::sqrt(1.0 / X)).real(), 1.0, 1e-15);
  for (double r : log_grid(0.05, 1.0, 200)) {
    const double v = F.eval(r).real();
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0 + 1e-15);
    const double u = X * r * r;
    if (u <= 0.5 || u >= 2.0) {
      EXPECT_EQ(v, 0.0);
    }
    if (u >= 0.75 && u <= 1.5) {
      EXPECT_NEAR(v, 1.0, 1e-15);
    }
  }
  EXPECT_THROW(gsk::test_function_FX(1.0), std::domain_error);
}

TEST(Smoothness, DifferencesBoundedAndVanishOutsideSupport) {
  const std::vector<gsk::RadialWeight> ws{gsk::annular_weight(3.0), gsk::test_function_FX(4.0),
                                          gsk::twisted_radial(gsk::plateau_omega(2.0), 2.0, 1.0)};
  for (const auto& w : ws) {
    const auto fd = gsk::RadialWeight::from_values(0, 10 * w.r_hi(), [&](double r) { return w.eval(r); });
    for (int j = 1; j <= 4; ++j) {
      double m = 0, defect = 0;
      for (double r : log_grid(w.r_lo(), w.r_hi(), 300)) {
        const gsk::Complex a = fd.deriv(j, r);
        m = std::max(m, std::abs(a));
        defect = std::max(defect, std::abs(a - w.deriv(j, r)));
      }
      EXPECT_TRUE(std::isfinite(m));
      // Differences resolve the steep edges poorly beyond second order; there
      // they serve only as a boundedness proxy.
      if (j <= 2) {
        EXPECT_LE(defect, 1e-3 * m) << w.name() << " j=" << j;
      }
      for (double r : {w.r_lo() * 0.9, w.r_hi() * 1.1, w.r_hi() * 2}) {
        EXPECT_EQ(w.deriv(j, r), gsk::Complex(0.0));
        EXPECT_EQ(fd.deriv(j, r), gsk::Complex(0.0));
      }
    }
  }
}

TEST(RadialWeight, Contract) {
  const auto w = gsk::annular_weight(2.0);
  for (double r : {0.5, 1.1, 1.3, 1.5})
    EXPECT_EQ(w.deriv(0, r), w.eval(r));
  EXPECT_EQ(w.eval(w.r_lo() - 1e-9), 0.0);
  EXPECT_EQ(w.eval(w.r_hi() + 1e-9), 0.0);
  EXPECT_EQ(gsk::RadialWeight::zero().eval(1.0), 0.0);
}
