#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "shrinker_ot/error.hpp"
#include "shrinker_ot/quadrature.hpp"
#include "shrinker_ot/transport.hpp"

using namespace shrinker_ot;

namespace {

DiscreteMeasure points(const Eigen::MatrixXd& p) {
  return DiscreteMeasure(p, Eigen::VectorXd::Constant(p.rows(), 1.0 / static_cast<double>(p.rows())));
}

}  // namespace

TEST(Exact, MatchesBruteForce) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> atoms(1, 4);
  for (int t = 0; t < 200; ++t) {
    const DiscreteMeasure a = oracle::random_measure(rng, atoms(rng), 2);
    const DiscreteMeasure b = oracle::random_measure(rng, atoms(rng), 2);
    const Eigen::MatrixXd c = cost_matrix(a, b, CostMetric::EuclideanTangent);
    const TransportResult r = solve_exact(a, b, c);
    EXPECT_NEAR(r.objective, oracle::brute_force_transport(a.weights(), b.weights(), c), 1e-10);
    EXPECT_LT(r.coupling.max_marginal_violation(), 1e-12);
    EXPECT_NEAR(r.coupling.objective(c), r.objective, 1e-12);
    EXPECT_NEAR(r.wasserstein * r.wasserstein, r.objective, 1e-12);
  }
}

TEST(Exact, TranslationClosedForm) {
  std::mt19937_64 rng(5);
  const DiscreteMeasure a = oracle::random_measure(rng, 30, 3);
  Eigen::MatrixXd moved = a.points();
  moved.rowwise() += Eigen::RowVector3d(0.3, -0.2, 0.5);
  const DiscreteMeasure b(moved, a.weights());
  EXPECT_NEAR(solve_exact(a, b).objective, 0.09 + 0.04 + 0.25, 1e-10);
  EXPECT_NEAR(solve_exact(a, a).objective, 0.0, 1e-15);
}

TEST(Exact, PermutationOfPoints) {
  Eigen::MatrixXd p(3, 1), q(3, 1);
  p << 0.0, 1.0, 2.0;
  q << 2.5, 0.5, 1.5;
  EXPECT_NEAR(solve_exact(points(p), points(q)).objective, 0.25, 1e-12);
}

TEST(Exact, CapacityAndMassChecks) {
  std::mt19937_64 rng(1);
  const DiscreteMeasure a = oracle::random_measure(rng, 10, 1);
  ExactOptions small;
  small.max_support = 5;
  EXPECT_THROW(solve_exact(a, a, small), Error);
  const DiscreteMeasure heavy(a.points(), 2.0 * a.weights());
  EXPECT_THROW(solve_exact(a, heavy), Error);
}

TEST(Sinkhorn, CloseToExact) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 3; ++t) {
    const DiscreteMeasure a = oracle::random_measure(rng, 80, 2);
    const DiscreteMeasure b = oracle::random_measure(rng, 70, 2);
    const Eigen::MatrixXd c = cost_matrix(a, b, CostMetric::EuclideanTangent);
    const double exact = solve_exact(a, b, c).objective;
    const TransportResult s = solve_sinkhorn(a, b, c);
    EXPECT_LT(std::abs(s.objective - exact) / exact, 1e-3);
    EXPECT_GE(s.objective, exact - 1e-12);
    EXPECT_EQ(s.solver, SolverKind::Sinkhorn);
    EXPECT_LT(s.diagnostics.max_marginal_violation, 1e-6);
    EXPECT_FALSE(s.diagnostics.stage_objectives.empty());
  }
}

TEST(Quantile, MatchesExactAndOracle) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 30; ++t) {
    const DiscreteMeasure a = oracle::random_measure(rng, 1 + t, 1);
    const DiscreteMeasure b = oracle::random_measure(rng, 40 - t, 1);
    const double w = wasserstein_1d_squared(a, b);
    EXPECT_NEAR(w, solve_exact(a, b).objective, 1e-10);
    EXPECT_NEAR(w, oracle::quantile_w2(a.points().col(0), a.weights(), b.points().col(0), b.weights()),
                1e-12);
  }
  std::mt19937_64 r2(3);
  const DiscreteMeasure plane = oracle::random_measure(r2, 5, 2);
  EXPECT_THROW(wasserstein_1d_squared(plane, plane), Error);
}

TEST(Cost, MetricTypes) {
  const ShrinkerModel model = ShrinkerModel::cylinder(3, 1);
  const DiscreteMeasure m = discretize_manifold(model, 8, 4);
  std::mt19937_64 rng(4);
  const DiscreteMeasure t = oracle::random_measure(rng, 5, 3);
  EXPECT_EQ(natural_metric(m, m), CostMetric::Geodesic);
  EXPECT_EQ(natural_metric(t, t), CostMetric::EuclideanTangent);
  EXPECT_THROW(cost_matrix(m, t, CostMetric::Geodesic), Error);
  EXPECT_THROW(cost_matrix(t, t, CostMetric::Geodesic), Error);
  const Eigen::MatrixXd c = cost_matrix(m, m, CostMetric::Geodesic);
  EXPECT_NEAR(c.diagonal().cwiseAbs().maxCoeff(), 0.0, 1e-20);
  EXPECT_LT((c - c.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Information, EntropyAndFisher) {
  Eigen::MatrixXd p(4, 1);
  p << 0.0, 1.0, 2.0, 3.0;
  const DiscreteMeasure nu = points(p);
  const DiscreteMeasure eta(p, Eigen::Vector4d(0.4, 0.3, 0.2, 0.1));
  double h = 0.0;
  for (double w : {0.4, 0.3, 0.2, 0.1}) h += w * std::log(w / 0.25);
  EXPECT_NEAR(relative_entropy(eta, nu), h, 1e-15);
  EXPECT_NEAR(relative_entropy(nu, nu), 0.0, 1e-16);
  const GradientField g = [](const PointRef& x) -> Eigen::VectorXd { return 2.0 * x; };
  EXPECT_NEAR(fisher_information(eta, g), 4.0 * (0.3 + 0.8 + 0.9), 1e-14);
  const DiscreteMeasure sub(p.topRows(2), Eigen::Vector2d(0.5, 0.5));
  try {
    relative_entropy(nu, sub);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AbsoluteContinuity);
  }
  const GradientField fd = finite_difference_gradient([](const PointRef& x) { return x.squaredNorm(); });
  EXPECT_NEAR(fd(Eigen::Vector2d(1.0, -2.0))[1], -4.0, 1e-8);
}

TEST(Information, TalagrandAndLsiOnShiftedLattice) {
  Scheme s;
  s.kind = SchemeKind::Lattice;
  s.radius_cap = 14.0;
  s.resolution = 112;
  const DiscreteMeasure nu = discretize_gaussian(1, s).normalized();
  const double m = 1.0;
  const DiscreteMeasure eta =
      nu.reweighted([m](const PointRef& x) { return std::exp(0.25 * (2.0 * x[0] * m - m * m)); })
          .normalized();
  const BoundReport t = check_talagrand(eta, nu, 0.5);
  EXPECT_TRUE(t.passed);
  EXPECT_NEAR(t.lhs, m * m, 1e-2);
  EXPECT_NEAR(t.rhs, m * m, 1e-6);
  const BoundReport l =
      check_lsi(eta, nu, 0.5, [m](const PointRef&) -> Eigen::VectorXd { return Eigen::VectorXd::Constant(1, m / 2); });
  EXPECT_NEAR(l.lhs, l.rhs, 1e-12);
  EXPECT_THROW(check_talagrand(eta, nu, 0.0), Error);
}
