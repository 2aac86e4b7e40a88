#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

#include "shrinker_ot/numerics.hpp"

using namespace shrinker_ot::numerics;

namespace {

double apply(const Rule& rule, auto f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

}  // namespace

TEST(GaussLegendre, ExactForDegreeTwoNMinusOne) {
  for (int n : {1, 2, 5, 16, 64}) {
    const Rule rule = gauss_legendre(n);
    ASSERT_EQ(rule.size(), static_cast<std::size_t>(n));
    for (int p = 0; p <= 2 * n - 1; ++p) {
      const double exact = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
      EXPECT_NEAR(apply(rule, [p](double x) { return std::pow(x, p); }), exact, 1e-13)
          << "n=" << n << " p=" << p;
    }
  }
}

TEST(GaussLegendre, MappedInterval) {
  const Rule rule = gauss_legendre(20, 1.0, 3.0);
  EXPECT_NEAR(apply(rule, [](double x) { return std::exp(x); }), std::exp(3.0) - std::exp(1.0), 1e-12);
  for (double x : rule.nodes) {
    EXPECT_GT(x, 1.0);
    EXPECT_LT(x, 3.0);
  }
}

TEST(GaussHermite, EvenMoments) {
  for (int n : {4, 10, 40}) {
    const Rule rule = gauss_hermite(n);
    for (int k = 0; 2 * k <= 2 * n - 1; ++k) {
      const double exact = boost::math::tgamma(k + 0.5);
      const double got = apply(rule, [k](double x) { return std::pow(x, 2 * k); });
      EXPECT_NEAR(got / exact, 1.0, 1e-12) << "n=" << n << " k=" << k;
      const double scale = apply(rule, [k](double x) { return std::abs(std::pow(x, 2 * k + 1)); });
      EXPECT_NEAR(apply(rule, [k](double x) { return std::pow(x, 2 * k + 1); }), 0.0, 1e-14 * scale);
    }
  }
}

TEST(GaussJacobi, SymmetricWeightMoments) {
  for (double alpha : {-0.5, 0.0, 0.5, 1.0, 2.5}) {
    const Rule rule = gauss_jacobi_symmetric(12, alpha);
    for (int k = 0; k <= 10; ++k) {
      // int_{-1}^1 t^{2k} (1-t^2)^alpha dt = B(k + 1/2, alpha + 1)
      const double exact = boost::math::beta(k + 0.5, alpha + 1.0);
      EXPECT_NEAR(apply(rule, [k](double t) { return std::pow(t, 2 * k); }) / exact, 1.0, 1e-12)
          << "alpha=" << alpha << " k=" << k;
    }
  }
}

TEST(SphereArea, LowDimensions) {
  EXPECT_DOUBLE_EQ(sphere_area(0), 2.0);
  EXPECT_NEAR(sphere_area(1), 2.0 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(sphere_area(2), 4.0 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(sphere_area(3), 2.0 * std::numbers::pi * std::numbers::pi, 1e-13);
  for (int d = 1; d < 12; ++d) {
    // |S^{d+1}| = 2 pi |S^{d-1}| / d
    EXPECT_NEAR(sphere_area(d + 1), 2.0 * std::numbers::pi * sphere_area(d - 1) / d, 1e-12);
  }
}

TEST(IntegrateAdaptive, SmoothAndPeaked) {
  const IntegrationResult smooth = integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0);
  EXPECT_NEAR(smooth.value, std::numbers::e - 1.0, 1e-14);
  const IntegrationResult peaked =
      integrate_adaptive([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, 1e-12);
  EXPECT_NEAR(peaked.value, 2.0 * std::atan(100.0) * 100.0, 1e-8);
  EXPECT_GT(peaked.intervals, 1);
}
