#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "gsk/aggregates.hpp"
#include "gsk/oracles.hpp"

using gsk::Complex;
using gsk::GaussianInt;

namespace {

std::vector<GaussianInt> box(double lo, double hi) {
  std::vector<GaussianInt> out;
  const auto r = static_cast<std::int64_t>(std::sqrt(hi)) + 1;
  for (std::int64_t x = -r; x <= r; ++x)
    for (std::int64_t y = -r; y <= r; ++y) {
      const double n = double(x * x + y * y);
      if (n > lo && n <= hi) out.push_back({x, y});
    }
  return out;
}

GaussianInt inverse_scan(GaussianInt r, GaussianInt m) {
  for (const auto& e : gsk::residues_mod(m))
    if (gsk::oracle::divides_fp(m, r * e - GaussianInt{1})) return e;
  throw std::logic_error("no inverse");
}

gsk::RadialWeight indicator(double lo, double hi) {
  return gsk::RadialWeight::from_values(lo, hi, [](double) { return Complex(1.0); });
}

// Smooth weight in x = |p|^2 supported in [P/2, P].
gsk::RadialWeight smooth_g(double P) {
  return gsk::RadialWeight::from_values(P / 2, P, [P](double x) { return Complex(gsk::bump_phi(4 * x / P - 3)); });
}

gsk::PointFn unit_phases(std::uint64_t seed) {
  return [seed](GaussianInt z) {
    std::mt19937_64 rng(seed ^ (std::uint64_t(z.re + 1000) * 7919u + std::uint64_t(z.im + 1000)));
    return std::polar(1.0, std::uniform_real_distribution<double>(0, 2 * std::numbers::pi)(rng));
  };
}

}  // namespace

TEST(EnumerateB, Examples) {
  EXPECT_EQ(gsk::enumerate_B(1, 1).size(), 16u);
  const auto b21 = gsk::enumerate_B(2, 1);
  EXPECT_EQ(b21.size(), 16u);
  for (const auto& [r, s] : b21) {
    EXPECT_EQ(gsk::norm(r), 2);
    EXPECT_TRUE(gsk::is_unit(s));
  }
  EXPECT_TRUE(gsk::enumerate_B(0.9, 1).empty());
  EXPECT_TRUE(gsk::enumerate_B(2, 2).empty());
}

TEST(EnumerateB, MatchesScan) {
  for (auto [R, S] : {std::pair{5.0, 4.0}, std::pair{10.0, 9.0}, std::pair{13.0, 2.0}}) {
    std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>> expect, got;
    for (const auto& r : box(R / 2, R))
      for (const auto& s : box(S / 2, S))
        if (gsk::oracle::gcd_norm_scan(r, s) == 1) expect.emplace(r.re, r.im, s.re, s.im);
    for (const auto& [r, s] : gsk::enumerate_B(R, S)) got.emplace(r.re, r.im, s.re, s.im);
    EXPECT_EQ(got, expect) << R << " " << S;
  }
}

TEST(KRs, Examples) {
  const auto g = indicator(1, 2);
  EXPECT_NEAR(std::abs(gsk::K_rs(1, 1, 1, 1, g) - Complex(8.0)), 0, 1e-12);
  EXPECT_EQ(gsk::K_rs(1, 1, 1, 1, gsk::RadialWeight::from_values(1, 2, [](double) { return Complex(0.0); })),
            Complex(0.0));
  EXPECT_THROW(gsk::K_rs({1, 1}, 2, 1, 1, g), std::domain_error);
}

TEST(KRs, IndependentOfInverseRepresentative) {
  const auto g = smooth_g(12);
  for (const auto& [r, s] : gsk::enumerate_B(5, 4)) {
    const Complex k0 = gsk::K_rs(r, s, {1, 2}, {2, -1}, g);
    for (const GaussianInt shift : {GaussianInt{1}, GaussianInt{-2, 3}})
      EXPECT_NEAR(std::abs(gsk::K_rs(r, s, {1, 2}, {2, -1}, g, shift) - k0), 0, 1e-9);
  }
}

TEST(KRs, MatchesBruteForce) {
  const auto g = smooth_g(10);
  for (const auto& [r, s] : gsk::enumerate_B(5, 2)) {
    Complex expect = 0;
    for (const auto& p : box(0, 10)) {
      if (gsk::oracle::gcd_norm_scan(p, r) != 1) continue;
      const GaussianInt ps = p * s;
      expect += g.eval(double(gsk::norm(p))) * gsk::oracle::kloosterman(inverse_scan(r, ps) * GaussianInt{2, 1}, 3, ps);
    }
    EXPECT_NEAR(std::abs(gsk::K_rs(r, s, {2, 1}, 3, g) - expect), 0, 1e-9);
  }
}

TEST(LambdaSum, ZeroAndTwoOrders) {
  gsk::CuspSumSpec spec;
  spec.R = 1;
  spec.S = 1;
  spec.N = 1;
  spec.L = 1;
  spec.P = 20;
  spec.g = smooth_g(20);
  spec.b = [](GaussianInt, GaussianInt) { return Complex(0.0); };
  const auto z = gsk::lambda_sum(spec);
  EXPECT_EQ(z.value, Complex(0.0));
  EXPECT_EQ(z.alternate, Complex(0.0));

  spec.R = 5;
  spec.S = 2;
  spec.N = 16;
  spec.L = 9;
  spec.P = 12;
  spec.g = smooth_g(12);
  spec.b = [](GaussianInt r, GaussianInt s) { return Complex(1.0 / double(gsk::norm(r)), double(s.re)); };
  spec.a = unit_phases(1);
  spec.A = unit_phases(2);
  const auto r = gsk::lambda_sum(spec);
  EXPECT_GT(std::abs(r.value), 0.0);
  EXPECT_LE(r.defect, 1e-9);
  EXPECT_LE(std::abs(r.value), r.trivial * (1 + 1e-12));
}

TEST(LambdaSum, MatchesTripleLoopOnDeskSpecs) {
  for (double RS : {1.0, 2.0}) {
    gsk::CuspSumSpec spec;
    spec.R = RS;
    spec.S = RS;
    spec.N = 1;
    spec.L = 1;
    spec.P = 12;
    spec.g = smooth_g(12);
    Complex expect = 0;
    for (const auto& r : box(RS / 2, RS))
      for (const auto& s : box(RS / 2, RS)) {
        if (gsk::oracle::gcd_norm_scan(r, s) != 1) continue;
        for (const auto& n : box(0.25, 1))
          for (const auto& l : box(0.5, 1))
            for (const auto& p : box(0, 12)) {
              if (gsk::oracle::gcd_norm_scan(p, r) != 1) continue;
              const GaussianInt ps = p * s;
              expect += spec.g.eval(double(gsk::norm(p))) * gsk::oracle::kloosterman(inverse_scan(r, ps) * n, l, ps);
            }
      }
    const auto got = gsk::lambda_sum(spec);
    EXPECT_NEAR(std::abs(got.value - expect), 0, 1e-9 * std::max(1.0, std::abs(expect))) << RS;
    EXPECT_LE(got.defect, 1e-9);
  }
}

TEST(LambdaSum, PreconditionsAndBudget) {
  gsk::CuspSumSpec spec;
  spec.N = 4;
  spec.P = 12;
  spec.g = smooth_g(12);
  EXPECT_THROW(gsk::lambda_sum(spec), std::domain_error);
  spec.N = 1;
  spec.g = smooth_g(20);
  EXPECT_THROW(gsk::lambda_sum(spec), std::domain_error);
  spec.g = smooth_g(12);
  spec.budget = 100;
  EXPECT_THROW(gsk::lambda_sum(spec), gsk::ResourceError);
}

TEST(RSum, ReferenceSpecIsEmptyOnTheLattice) {
  // No h with 1 < |h|^2 < 2, so the weight vanishes at every lattice point.
  gsk::AggregateSpec spec;
  spec.H = 2, spec.K = 4, spec.L = 4, spec.P = 8, spec.Q = 16;
  const auto r = gsk::r_sum(spec);
  EXPECT_EQ(r.value, Complex(0.0));
  EXPECT_EQ(r.alternate, Complex(0.0));
  EXPECT_LE(r.ratio, 10.0);
}

TEST(RSum, TwoOrdersAgreeAndTrivialBound) {
  gsk::AggregateSpec spec;
  spec.H = 3, spec.K = 5, spec.L = 5, spec.P = 10, spec.Q = 10;
  spec.theta = unit_phases(3);
  spec.phi_h = unit_phases(4);
  spec.upsilon = unit_phases(5);
  const auto r = gsk::r_sum(spec);
  EXPECT_GT(std::abs(r.value), 0.0);
  EXPECT_LE(r.defect, 1e-9);
  EXPECT_LE(r.ratio, 10.0);

  spec.upsilon = [](GaussianInt) { return Complex(0.0); };
  EXPECT_EQ(gsk::r_sum(spec).value, Complex(0.0));
  spec.budget = 1000;
  EXPECT_THROW(gsk::r_sum(spec), gsk::ResourceError);
}

TEST(RSum, MatchesOracleOnSmallSpec) {
  gsk::AggregateSpec spec;
  spec.H = 3, spec.K = 3, spec.L = 3, spec.P = 10, spec.Q = 5;
  spec.theta = unit_phases(6);
  spec.phi_h = unit_phases(7);
  spec.upsilon = unit_phases(8);
  Complex expect = 0;
  const auto w = gsk::annular_product_weight(3, 3, 3, 10, 5);
  for (const auto& p : box(5, 10))
    for (const auto& q : box(2.5, 5))
      for (const auto& h : box(1.5, 3))
        for (const auto& k : box(1.5, 3))
          for (const auto& l : box(1.5, 3))
            expect += spec.theta(p) / double(gsk::norm(p) * gsk::norm(q)) * spec.phi_h(h) *
                      gsk::oracle::kloosterman(h * k, l, p * q) * w(h, k, l, p, q) * spec.upsilon(l);
  const auto r = gsk::r_sum(spec);
  EXPECT_GT(std::abs(expect), 0.0);
  EXPECT_NEAR(std::abs(r.value - expect), 0, 1e-9 * std::abs(expect));
}

TEST(LevelSum, EmptyWindow) {
  const auto f = gsk::test_function_FX(16);
  const auto r = gsk::level_sum(1, 1, 40, f);
  EXPECT_EQ(r.value, Complex(0.0));
  EXPECT_EQ(r.visited, 0u);
  EXPECT_THROW(gsk::level_sum(1, 1, 0, f), std::domain_error);
}

TEST(LevelSum, VisitsExactlyTheSupportWindow) {
  const auto f = gsk::test_function_FX(16);
  for (const GaussianInt q : {GaussianInt{1}, GaussianInt{1, 1}, GaussianInt{2, 1}}) {
    const GaussianInt m{1}, n{1};
    const auto r = gsk::level_sum(m, n, q, f);
    EXPECT_GT(r.visited, 0u);
    // Every multiple of q in a disc past the window, with no window logic.
    std::size_t inside = 0;
    Complex expect = 0;
    for (const auto& c : box(0, 1.5 * r.c_norm_hi)) {
      if (!gsk::divides(q, c)) continue;
      const double arg = 2 * std::numbers::pi / std::sqrt(double(gsk::norm(c)));
      if (arg >= f.r_lo() && arg <= f.r_hi()) ++inside;
      const Complex fv = f.eval(arg);
      if (fv != Complex(0)) expect += gsk::kloosterman(m, n, c).value / double(gsk::norm(c)) * fv;
    }
    EXPECT_EQ(r.visited, inside) << q;
    EXPECT_NEAR(std::abs(r.value - expect), 0, 1e-12 * (1 + std::abs(expect))) << q;
  }
}

TEST(LevelSum, ConjugationInvariance) {
  const auto f = gsk::test_function_FX(8);
  for (auto [m, n] : {std::pair{GaussianInt{2, 1}, GaussianInt{1, -1}}, std::pair{GaussianInt{3}, GaussianInt{0, 2}}}) {
    const auto a = gsk::level_sum(m, n, {1, 1}, f);
    const auto b = gsk::level_sum(gsk::conj(m), gsk::conj(n), {1, 1}, f);
    EXPECT_NEAR(std::abs(a.value - b.value), 0, 1e-12 * (1 + std::abs(a.value)));
    EXPECT_EQ(a.visited, b.visited);
  }
}

TEST(Bilinear, Examples) {
  const gsk::PointFn zero = [](GaussianInt) { return Complex(0.0); };
  const gsk::PointFn alpha = [](GaussianInt h) { return Complex(1.0 / (1 + double(gsk::norm(h))), 0.2 * double(h.re)); };
  const gsk::PointFn beta = [](GaussianInt k) { return Complex(double(k.im), 1.0); };
  EXPECT_EQ(gsk::bilinear_ratio(zero, beta, 4, 4, 0.5, 1.0, {2, 1}).sum, Complex(0.0));

  // A unit modulus factorises the sum.
  const double u = 0.7;
  Complex sa = 0, sb = 0;
  for (const auto& h : box(2, 4)) sa += alpha(h) * std::polar(1.0, u * std::log(std::abs(Complex(double(h.re), double(h.im)))));
  for (const auto& k : box(4.5, 9)) sb += beta(k) * std::polar(1.0, u * std::log(std::abs(Complex(double(k.re), double(k.im)))));
  EXPECT_NEAR(std::abs(gsk::bilinear_ratio(alpha, beta, 4, 9, 0.5, u, {0, 1}).sum - sa * sb), 0, 1e-12);

  Complex expect = 0;
  for (const auto& h : box(1, 2))
    for (const auto& k : box(1, 2)) expect += alpha(h) * beta(k) * gsk::oracle::kloosterman(h, k, {1, 1});
  const auto r = gsk::bilinear_ratio(alpha, beta, 2, 2, 0.5, 0.0, {1, 1});
  EXPECT_NEAR(std::abs(r.sum - expect), 0, 1e-12);
  EXPECT_LE(std::abs(r.sum), r.trivial * (1 + 1e-12));
  EXPECT_LE(r.ratio, 1.0 + 1e-12);
}
