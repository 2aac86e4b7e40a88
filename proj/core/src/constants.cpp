#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "shrinker_ot/bounds.hpp"
#include "shrinker_ot/error.hpp"
#include "shrinker_ot/numerics.hpp"

namespace shrinker_ot {
namespace {

constexpr double kEntropyTolerance = 1e-6;

// int over Omega of (4 pi)^{-n/2} J e^{-f(exp_p v)} dv at the minimum point, polar on the
// sphere factor and Gauss-Hermite on the Euclidean factor (exact there).
double pullback_mass(const ShrinkerModel& model) {
  const ShrinkerModel centred = model.with_base_point(model.minimum_point());
  const PolarCounts counts{128, 8, model.sphere_dim(), 8};
  return discretize_pullback(centred, counts, 14.0, 1e-12).total_mass();
}

std::vector<ManifoldPoint> sample_points(const ShrinkerModel& model, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 2.0);
  std::vector<ManifoldPoint> out;
  out.reserve(count);
  const int n = model.dimension();
  while (static_cast<int>(out.size()) < count) {
    TangentVector v{Eigen::VectorXd(n)};
    for (int j = 0; j < n; ++j) v.coords[j] = normal(rng);
    if (model.sphere_dim() > 0 &&
        v.coords.head(model.sphere_dim()).norm() >= 0.999 * model.cut_radius()) {
      continue;
    }
    out.push_back(model.exp_map(v));
  }
  return out;
}

}  // namespace

double gamma_integral(double s, int k, double a) {
  if (k < 0) throw Error(ErrorCode::Precondition, "Gamma integral needs k >= 0");
  const double lo = std::max(s, 0.0);
  const auto log_g = [k, a](double r) {
    return (k == 0 ? 0.0 : k * std::log(r)) - 0.25 * r * r + a * r;
  };
  const auto g = [&](double r) { return r == 0.0 && k > 0 ? 0.0 : std::exp(log_g(r)); };
  const double peak = a + std::sqrt(a * a + 2.0 * k);
  const double top = std::max(lo, peak);
  const double log_top = top == 0.0 && k > 0 ? log_g(1e-300) : log_g(top);
  // Truncate once the integrand falls 1e-18 below its maximum on [lo, inf).
  double hi = top + 1.0;
  while (log_g(hi) > log_top + std::log(1e-18)) hi += 1.0;

  double total = 0.0;
  if (peak > lo) total += numerics::integrate_adaptive(g, lo, peak, 1e-13).value;
  total += numerics::integrate_adaptive(g, top, hi, 1e-13).value;
  return total;
}

double alpha_constant(int k, double s, double a, double b) {
  if (a < 0.0 || b < 0.0) {
    throw Error(ErrorCode::Precondition, fmt::format("alpha needs a, b >= 0 (a={}, b={})", a, b));
  }
  if (a == 0.0 && b == 0.0) return 0.0;
  if (k < 2) throw Error(ErrorCode::Precondition, "alpha needs k >= 2");
  const double prefactor =
      std::pow(4.0 * std::numbers::pi, -0.5 * k) * numerics::sphere_area(k - 1) * std::exp(b);
  const double ga = a == 0.0 ? 0.0 : a * gamma_integral(s, k, a);
  const double gb = b == 0.0 ? 0.0 : b * gamma_integral(s, k - 1, a);
  return prefactor * (ga + gb);
}

double entropy_closed_form(const ShrinkerModel& model) {
  const int m = model.sphere_dim();
  if (m == 0) return 0.0;
  return std::log(numerics::sphere_area(m)) -
         0.5 * m * (std::log(2.0 * std::numbers::pi / (m - 1)) + 1.0);
}

EntropyResult entropy(const ShrinkerModel& model) {
  EntropyResult out;
  out.closed_form = entropy_closed_form(model);
  const double mass = pullback_mass(model);
  out.log_volume = std::log(mass) + model.normalization_shift();

  double c_sum = 0.0;
  const std::vector<ManifoldPoint> points = sample_points(model, 200, 11);
  for (const ManifoldPoint& x : points) {
    c_sum += model.scalar_curvature(x) + model.potential_gradient(x).squaredNorm() -
             model.raw_potential(x);
  }
  out.hamilton_c = c_sum / static_cast<double>(points.size());
  out.numeric = out.log_volume - out.hamilton_c;
  out.discrepancy = std::abs(out.numeric - out.closed_form);
  if (out.discrepancy > kEntropyTolerance) {
    throw Error(ErrorCode::Consistency,
                fmt::format("entropy of {}: closed form {:.12g}, quadrature {:.12g}", model.name(),
                            out.closed_form, out.numeric));
  }
  return out;
}

double hamilton_residual(const ShrinkerModel& model, int samples, std::uint64_t seed) {
  const double mu = entropy_closed_form(model);
  double worst = 0.0;
  for (const ManifoldPoint& x : sample_points(model, samples, seed)) {
    const double r = model.scalar_curvature(x) + model.potential_gradient(x).squaredNorm() -
                     model.potential(x) + mu;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace shrinker_ot
