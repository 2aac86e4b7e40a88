#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "shrinker_ot/error.hpp"
#include "shrinker_ot/numerics.hpp"
#include "shrinker_ot/quadrature.hpp"

namespace shrinker_ot {
namespace {

// int_lo^hi r^power e^{-r^2/4 + C r} phi(r) dr, with hi = inf allowed.
double radial_weight_integral(double lo, double hi, double power, double C,
                              const std::function<double(double)>& phi) {
  const double peak = C + std::sqrt(C * C + 2.0 * power);
  const double far = std::max(lo, peak) + 60.0;
  const double upper = std::isinf(hi) ? far : std::min(hi, far);
  if (!(upper > lo)) return 0.0;
  const auto g = [&](double r) {
    return std::pow(r, power) * std::exp(-0.25 * r * r + C * r) * phi(r);
  };
  // Split at the peak so the adaptive rule sees it.
  double total = 0.0;
  if (peak > lo && peak < upper) {
    total += numerics::integrate_adaptive(g, lo, peak, 1e-12).value;
    total += numerics::integrate_adaptive(g, peak, upper, 1e-12).value;
  } else {
    total = numerics::integrate_adaptive(g, lo, upper, 1e-12).value;
  }
  return total;
}

std::vector<Eigen::VectorXd> fit_directions(int n, int angular) {
  std::vector<Eigen::VectorXd> dirs;
  const SphereRule rule = sphere_rule(n - 1, angular);
  for (Eigen::Index i = 0; i < rule.nodes.rows(); ++i) dirs.push_back(rule.nodes.row(i).transpose());
  for (int axis = 0; axis < n; ++axis) {
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[axis] = sign;
      dirs.push_back(e);
    }
  }
  return dirs;
}

double ray_end(const ShrinkerModel& model, const Eigen::VectorXd& theta, double cap) {
  const int m = model.sphere_dim();
  if (m == 0) return cap;
  const double c = theta.head(m).norm();
  if (c == 0.0) return cap;
  return std::min(cap, model.cut_radius() / c * (1.0 - 1e-12));
}

}  // namespace

GrowthConstants growth_constants(const ShrinkerModel& model, double r0, const GrowthFitGrid& grid) {
  if (!(r0 > 0.0)) throw Error(ErrorCode::Precondition, "r0 must be positive");
  if (grid.radial < 2) throw Error(ErrorCode::Config, "growth fit needs radial >= 2");
  GrowthConstants gc;
  gc.r0 = r0;
  const int n = model.dimension();
  const double fp = model.potential(model.base_point());

  double worst = 0.0;
  double lambda0 = fp;
  for (const Eigen::VectorXd& theta : fit_directions(n, grid.angular)) {
    const double end = ray_end(model, theta, grid.max_radius);
    for (int j = 0; j < grid.radial; ++j) {
      const double t = static_cast<double>(j) / (grid.radial - 1);
      // Inner ball samples for lambda0.
      const double r_in = std::min(r0, end) * t;
      lambda0 = std::min(lambda0, model.pulled_back_potential(TangentVector{r_in * theta}));
      if (end < r0) continue;
      const double r = r0 + (end - r0) * t;
      const double f = model.pulled_back_potential(TangentVector{r * theta});
      worst = std::max(worst, (0.5 * gc.rho * r * r - f) / r);
    }
  }
  gc.C = 1.05 * worst;
  gc.lambda0 = lambda0;
  gc.lambda1 = 2.0 * lambda0 - gc.rho * r0 * r0 / 3.0 + gc.C * r0;
  gc.lambda = std::max(0.0, -gc.lambda1);

  const DiscreteMeasure ball = discretize_pullback(model, PolarCounts{64, 24}, r0);
  gc.A = ball.total_mass() * std::pow(4.0 * std::numbers::pi, 0.5 * n);
  gc.B = numerics::sphere_area(n - 1) * std::exp(gc.lambda + fp);
  return gc;
}

MomentResult moments(const ShrinkerModel& model, double k, double radius_cap,
                     const PolarCounts& counts) {
  if (!(k > 0.0)) throw Error(ErrorCode::Precondition, "moment order must be positive");
  const DiscreteMeasure nu = discretize_pullback(model, counts, radius_cap);
  MomentResult out;
  out.radius_cap = radius_cap;
  out.value = integrate(nu, [k](const PointRef& v) { return std::pow(v.norm(), k); });

  const GrowthConstants gc = growth_constants(model);
  const int n = model.dimension();
  const double tail = radial_weight_integral(radius_cap, std::numeric_limits<double>::infinity(),
                                             k + n - 1, gc.C, [](double) { return 1.0; });
  out.tail_bound = std::pow(4.0 * std::numbers::pi, -0.5 * n) * gc.B * tail;
  return out;
}

BoundReport growth_bound_check(const ShrinkerModel& model, const std::function<double(double)>& phi,
                               double R, double r0, const PolarCounts& counts) {
  if (R < r0) {
    throw Error(ErrorCode::Precondition, fmt::format("R = {} is below r0 = {}", R, r0));
  }
  constexpr int kMonotoneSamples = 1000;
  double previous = phi(0.0);
  for (int i = 1; i <= kMonotoneSamples; ++i) {
    const double value = phi(R * i / kMonotoneSamples);
    if (!std::isfinite(value) || value < previous - 1e-14 * std::abs(previous)) {
      throw Error(ErrorCode::Precondition, "phi must be finite and nondecreasing on [0, R]");
    }
    previous = value;
  }

  const GrowthConstants gc = growth_constants(model, r0);
  const int n = model.dimension();
  const DiscreteMeasure ball = discretize_pullback(model, counts, R);
  const double lhs = std::pow(4.0 * std::numbers::pi, 0.5 * n) *
                     integrate(ball, [&](const PointRef& v) { return phi(v.norm()); });
  const double radial = radial_weight_integral(r0, R, n - 1, gc.C, phi);

  BoundReport report;
  report.theorem_id = "growth";
  report.lhs = lhs;
  report.rhs = gc.A * phi(r0) + gc.B * radial;
  report.tolerance = 1e-9 * std::max(1.0, std::abs(report.rhs));
  report.constants.set("rho", gc.rho);
  report.constants.set("r0", gc.r0);
  report.constants.set("R", R);
  report.constants.set("C", gc.C);
  report.constants.set("lambda0", gc.lambda0);
  report.constants.set("lambda1", gc.lambda1);
  report.constants.set("lambda", gc.lambda);
  report.constants.set("A", gc.A);
  report.constants.set("B", gc.B);
  report.constants.set("radial_integral", radial);
  report.scheme = "polar";
  report.discretization.set("radial", counts.radial);
  report.discretization.set("angular", counts.angular);
  report.discretization.set("atoms", static_cast<double>(ball.size()));
  report.notes.push_back("lambda taken as max(0, -lambda1)");
  report.finalize();
  return report;
}

}  // namespace shrinker_ot
