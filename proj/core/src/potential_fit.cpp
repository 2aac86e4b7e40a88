#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "shrinker_ot/bounds.hpp"
#include "shrinker_ot/error.hpp"

namespace shrinker_ot {
namespace {

struct Sample {
  double r;
  double f;
};

// (r, f(exp_p v)) on rays r >= s, up to the grid cap or the cut locus.
std::vector<Sample> radial_samples(const ShrinkerModel& model, double s, const FitGrid& grid) {
  if (grid.radial < 2 || grid.angular < 1) throw Error(ErrorCode::Config, "fit grid is too small");
  const int n = model.dimension();
  const int m = model.sphere_dim();
  std::vector<Eigen::VectorXd> dirs;
  const SphereRule rule = sphere_rule(n - 1, grid.angular);
  for (Eigen::Index i = 0; i < rule.nodes.rows(); ++i) dirs.push_back(rule.nodes.row(i).transpose());
  for (int axis = 0; axis < n; ++axis) {
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[axis] = sign;
      dirs.push_back(e);
    }
  }

  std::vector<Sample> out;
  for (const Eigen::VectorXd& theta : dirs) {
    double end = grid.radius_cap;
    if (m > 0) {
      const double c = theta.head(m).norm();
      if (c > 0.0) end = std::min(end, model.cut_radius() / c * (1.0 - 1e-12));
    }
    if (end < s) continue;
    for (int j = 0; j < grid.radial; ++j) {
      const double r = s + (end - s) * j / (grid.radial - 1);
      out.push_back({r, model.pulled_back_potential(TangentVector{r * theta})});
    }
  }
  return out;
}

// Excess below 1e-12 of r^2/4 is rounding in f, not a violation.
double b_for(const std::vector<Sample>& samples, double a) {
  double worst = 0.0;
  for (const Sample& x : samples) {
    const double q = 0.25 * x.r * x.r;
    const double excess = q - a * x.r - x.f;
    if (excess > 1e-12 * (1.0 + q)) worst = std::max(worst, excess);
  }
  return worst;
}

}  // namespace

double required_b(const ShrinkerModel& model, double s, double a, const FitGrid& grid) {
  const std::vector<Sample> samples = radial_samples(model, s, grid);
  if (samples.empty()) throw Error(ErrorCode::Fit, fmt::format("no grid point with r >= {}", s));
  return b_for(samples, a);
}

double potential_bound_slack(const ShrinkerModel& model, const PotentialBound& bound,
                             const FitGrid& grid) {
  double slack = std::numeric_limits<double>::infinity();
  for (const Sample& x : radial_samples(model, bound.s, grid)) {
    slack = std::min(slack, x.f - 0.25 * x.r * x.r + bound.a * x.r + bound.b);
  }
  return slack;
}

PotentialBound fit_potential_bound(const ShrinkerModel& model, double s, const FitGrid& grid) {
  if (s < 0.0) throw Error(ErrorCode::Precondition, "s must be nonnegative");
  if (grid.a_steps < 1 || !(grid.a_max >= 0.0)) throw Error(ErrorCode::Config, "bad a-search grid");
  const std::vector<Sample> samples = radial_samples(model, s, grid);
  if (samples.empty()) {
    throw Error(ErrorCode::Fit, fmt::format("no grid point with r >= {} for {}", s, model.name()));
  }
  const int n = model.dimension();
  PotentialBound bound;
  bound.s = s;
  // alpha exists only for a = b = 0 below n = 2; otherwise a = 0 is the only choice tried.
  if (n < 2 || grid.a_max == 0.0 || grid.a_steps == 1) {
    bound.b = b_for(samples, 0.0) * (1.0 + grid.inflation);
    return bound;
  }
  const auto objective = [&](double a) { return alpha_constant(n, s, a, b_for(samples, a)); };

  double best_a = 0.0;
  double best = objective(0.0);
  const double step = grid.a_max / (grid.a_steps - 1);
  for (int i = 1; i < grid.a_steps; ++i) {
    const double a = step * i;
    const double value = objective(a);
    if (value < best) {
      best = value;
      best_a = a;
    }
  }
  // Golden-section refinement inside the neighbouring grid cells.
  if (best > 0.0) {
    double lo = std::max(0.0, best_a - step);
    double hi = std::min(grid.a_max, best_a + step);
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    for (int it = 0; it < 60; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - ratio * (hi - lo);
        f1 = objective(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + ratio * (hi - lo);
        f2 = objective(x2);
      }
    }
    const double a = 0.5 * (lo + hi);
    if (objective(a) < best) best_a = a;
  }

  bound.a = best_a * (1.0 + grid.inflation);
  bound.b = b_for(samples, best_a) * (1.0 + grid.inflation);
  return bound;
}

}  // namespace shrinker_ot
