#include "shrinker_ot/quadrature.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <random>

#include "shrinker_ot/error.hpp"
#include "shrinker_ot/numerics.hpp"
#include "shrinker_ot/parallel.hpp"

namespace shrinker_ot {
namespace {

constexpr long kMaxLatticeAtoms = 4'000'000;
constexpr int kMaxHermite = 96;

int sphere_rule_size(int dim, int angular) {
  if (dim == 0) return 2;
  if (dim == 1) return angular;
  return std::max(1, angular / 2) * sphere_rule_size(dim - 1, angular);
}

double gaussian_normalizer(int n) {
  return std::pow(4.0 * std::numbers::pi, -0.5 * n);
}

// Upper radius of the polar ray along unit direction theta.
double ray_limit(const ShrinkerModel& model, const Eigen::VectorXd& theta, double cap,
                 double cut_shell) {
  const int m = model.sphere_dim();
  if (m == 0) return cap;
  const double c = theta.head(m).norm();
  if (c == 0.0) return cap;
  return std::min(cap, model.cut_radius() * (1.0 - cut_shell) / c);
}

// Density of nu-bar against Lebesgue measure on T_pM, or 0 outside Omega.
double pullback_density(const ShrinkerModel& model, const TangentVector& v, double norm) {
  if (!model.in_omega(v)) return 0.0;
  return norm * model.jacobian_density(v) * std::exp(-model.pulled_back_potential(v));
}

DiscreteMeasure lattice_pullback(const ShrinkerModel& model, const Scheme& scheme) {
  const int n = model.dimension();
  const int per_axis = scheme.resolution;
  if (per_axis < 2) throw Error(ErrorCode::Config, "lattice scheme needs resolution >= 2");
  const double total = std::pow(static_cast<double>(per_axis), n);
  if (total > static_cast<double>(kMaxLatticeAtoms)) {
    throw Error(ErrorCode::Config,
                fmt::format("lattice with {}^{} cells exceeds {} atoms", per_axis, n,
                            kMaxLatticeAtoms));
  }
  const auto count = static_cast<Eigen::Index>(total);
  const double half = scheme.radius_cap;
  const double h = 2.0 * half / per_axis;
  const double norm = gaussian_normalizer(n) * std::pow(h, n);
  const double shell_radius = model.cut_radius() * (1.0 - scheme.cut_shell);
  const int m = model.sphere_dim();

  Eigen::MatrixXd points(count, n);
  Eigen::VectorXd weights(count);
  parallel_for(0, static_cast<std::size_t>(count), [&](std::size_t idx) {
    std::size_t rest = idx;
    TangentVector v{Eigen::VectorXd(n)};
    for (int axis = n - 1; axis >= 0; --axis) {
      const auto cell = static_cast<int>(rest % per_axis);
      rest /= per_axis;
      v.coords[axis] = -half + h * (cell + 0.5);
    }
    const auto i = static_cast<Eigen::Index>(idx);
    points.row(i) = v.coords.transpose();
    const bool inside = (m == 0 || v.coords.head(m).norm() < shell_radius) &&
                        v.coords.norm() >= scheme.shell;
    weights[i] = inside ? pullback_density(model, v, norm) : 0.0;
  });
  return DiscreteMeasure(std::move(points), std::move(weights));
}

DiscreteMeasure monte_carlo_pullback(const ShrinkerModel& model, const Scheme& scheme) {
  const int n = model.dimension();
  if (scheme.resolution < 1) throw Error(ErrorCode::Config, "Monte Carlo needs resolution >= 1");
  const Eigen::Index count = scheme.resolution;
  std::mt19937_64 rng(scheme.seed);
  std::normal_distribution<double> normal(0.0, std::numbers::sqrt2);
  Eigen::MatrixXd points(count, n);
  for (Eigen::Index i = 0; i < count; ++i) {
    for (int j = 0; j < n; ++j) points(i, j) = normal(rng);
  }
  const double shell_radius = model.cut_radius() * (1.0 - scheme.cut_shell);
  const int m = model.sphere_dim();
  Eigen::VectorXd weights(count);
  parallel_for(0, static_cast<std::size_t>(count), [&](std::size_t idx) {
    const auto i = static_cast<Eigen::Index>(idx);
    const TangentVector v{points.row(i).transpose()};
    const bool inside = (m == 0 || v.coords.head(m).norm() < shell_radius) &&
                        v.coords.norm() >= scheme.shell;
    if (!inside || !model.in_omega(v)) {
      weights[i] = 0.0;
      return;
    }
    // Importance weight d(nu-bar)/d(gamma) over the sample count.
    const double log_ratio = 0.25 * v.coords.squaredNorm() - model.pulled_back_potential(v);
    weights[i] = model.jacobian_density(v) * std::exp(log_ratio) / static_cast<double>(count);
  });
  return DiscreteMeasure(std::move(points), std::move(weights));
}

}  // namespace

std::string to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Polar: return "polar";
    case SchemeKind::Lattice: return "lattice";
    case SchemeKind::MonteCarlo: return "monte-carlo";
  }
  return "unknown";
}

SchemeKind parse_scheme_kind(const std::string& name) {
  if (name == "polar") return SchemeKind::Polar;
  if (name == "lattice") return SchemeKind::Lattice;
  if (name == "monte-carlo" || name == "montecarlo") return SchemeKind::MonteCarlo;
  throw Error(ErrorCode::Config,
              "unsupported scheme '" + name + "' (expected polar, lattice or monte-carlo)");
}

Scheme resolve_scheme(const ShrinkerModel& model, const Scheme& scheme) {
  Scheme out = scheme;
  if (out.polar_dims < 0) out.polar_dims = model.sphere_dim();
  return out;
}

PolarCounts polar_counts(int n, int resolution, int polar_dims, bool balanced) {
  if (n < 1) throw Error(ErrorCode::Precondition, "dimension must be positive");
  const int d = polar_dims < 0 ? n : polar_dims;
  if (d > n) throw Error(ErrorCode::Config, fmt::format("polar block {} exceeds n={}", d, n));
  const int h = n - d;
  if (d == 0) {
    auto per_axis = static_cast<int>(std::floor(std::pow(resolution, 1.0 / n) + 1e-9));
    per_axis = std::min(per_axis, kMaxHermite);
    if (per_axis < 2) {
      throw Error(ErrorCode::Config,
                  fmt::format("Hermite grid resolution {} too small for n={}", resolution, n));
    }
    return {0, 0, 0, per_axis};
  }
  const auto directions_times_hermite = [&](int a) {
    double size = sphere_rule_size(d - 1, a);
    for (int j = 0; j < h; ++j) size *= a;
    return size;
  };
  if (balanced && h > 0) {
    const int directions = sphere_rule_size(d - 1, 2);
    auto per_axis = static_cast<int>(
        std::floor(std::pow(resolution / (2.0 * directions), 1.0 / (h + 1)) + 1e-9));
    per_axis = std::min(per_axis, kMaxHermite);
    double cells = directions;
    for (int j = 0; j < h; ++j) cells *= per_axis;
    const auto radial = static_cast<int>(resolution / cells);
    if (per_axis < 2 || radial < 2) {
      throw Error(ErrorCode::Config,
                  fmt::format("polar scheme resolution {} too small for n={}", resolution, n));
    }
    return {radial, 2, d, per_axis};
  }
  const double budget = resolution / (2.0 * std::sqrt(static_cast<double>(resolution)));
  int best = 2;
  for (int a = 4; a <= kMaxHermite && directions_times_hermite(a) <= budget; a += 2) best = a;
  const auto radial = static_cast<int>(resolution / directions_times_hermite(best));
  if (radial < 2) {
    throw Error(ErrorCode::Config,
                fmt::format("polar scheme resolution {} too small for n={}", resolution, n));
  }
  return {radial, best, d, h > 0 ? best : 0};
}

SphereRule sphere_rule(int dim, int angular) {
  if (dim < 0) throw Error(ErrorCode::Precondition, "sphere dimension must be >= 0");
  SphereRule rule;
  if (dim == 0) {
    rule.nodes.resize(2, 1);
    rule.nodes << -1.0, 1.0;
    rule.weights = Eigen::VectorXd::Ones(2);
    return rule;
  }
  if (angular < 1) throw Error(ErrorCode::Config, "sphere rule needs angular >= 1");
  if (dim == 1) {
    rule.nodes.resize(angular, 2);
    rule.weights = Eigen::VectorXd::Constant(angular, 2.0 * std::numbers::pi / angular);
    for (int j = 0; j < angular; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / angular;
      rule.nodes(j, 0) = std::cos(phi);
      rule.nodes(j, 1) = std::sin(phi);
    }
    return rule;
  }
  const SphereRule lower = sphere_rule(dim - 1, angular);
  const numerics::Rule heights =
      numerics::gauss_jacobi_symmetric(std::max(1, angular / 2), 0.5 * (dim - 2));
  const auto per = lower.nodes.rows();
  const auto count = static_cast<Eigen::Index>(heights.size()) * per;
  rule.nodes.resize(count, dim + 1);
  rule.weights.resize(count);
  for (std::size_t h = 0; h < heights.size(); ++h) {
    const double t = heights.nodes[h];
    const double ring = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (Eigen::Index j = 0; j < per; ++j) {
      const Eigen::Index row = static_cast<Eigen::Index>(h) * per + j;
      rule.nodes.row(row).head(dim) = ring * lower.nodes.row(j);
      rule.nodes(row, dim) = t;
      rule.weights[row] = heights.weights[h] * lower.weights[j];
    }
  }
  return rule;
}

DiscreteMeasure discretize_pullback(const ShrinkerModel& model, const PolarCounts& counts,
                                    double radius_cap, double cut_shell, double shell) {
  if (!(radius_cap > 0.0)) throw Error(ErrorCode::Config, "radius cap must be positive");
  if (!(shell >= 0.0)) throw Error(ErrorCode::Precondition, "shell radius must be nonnegative");
  const int n = model.dimension();
  const int d = counts.polar_dims < 0 ? n : counts.polar_dims;
  const int h = n - d;
  if (d > n) throw Error(ErrorCode::Config, fmt::format("polar block {} exceeds n={}", d, n));
  if (d < model.sphere_dim()) {
    throw Error(ErrorCode::Config, "the polar block must contain the sphere factor");
  }
  if (d > 0 && counts.radial < 1) throw Error(ErrorCode::Config, "polar scheme needs radial >= 1");
  if (h > 0 && counts.hermite < 1) throw Error(ErrorCode::Config, "Hermite grid needs nodes >= 1");

  // Polar block: one origin atom when empty.
  SphereRule dirs;
  numerics::Rule unit;
  if (d == 0) {
    dirs.nodes.resize(1, 0);
    dirs.weights = Eigen::VectorXd::Ones(1);
    unit.nodes = {-1.0};
    unit.weights = {2.0};
  } else {
    dirs = sphere_rule(d - 1, counts.angular);
    unit = numerics::gauss_legendre(counts.radial);
  }
  // Hermite block in y = 2x: log of 2 w e^{x^2}, so the weight carries the density.
  const numerics::Rule gh = h > 0 ? numerics::gauss_hermite(counts.hermite) : numerics::Rule{};
  std::vector<double> log_gh(gh.size());
  for (std::size_t i = 0; i < gh.size(); ++i) {
    log_gh[i] = std::log(2.0 * gh.weights[i]) + gh.nodes[i] * gh.nodes[i];
  }
  Eigen::Index grid = 1;
  for (int j = 0; j < h; ++j) grid *= counts.hermite;

  const double norm = gaussian_normalizer(n);
  const auto per = static_cast<Eigen::Index>(unit.size());
  const Eigen::Index count = dirs.nodes.rows() * per * grid;
  const int m = model.sphere_dim();
  const double shell_radius = model.cut_radius() * (1.0 - cut_shell);

  Eigen::MatrixXd points(count, n);
  Eigen::VectorXd weights(count);
  parallel_for(0, static_cast<std::size_t>(dirs.nodes.rows()), [&](std::size_t dd) {
    const auto di = static_cast<Eigen::Index>(dd);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(n);
    theta.head(d) = dirs.nodes.row(di).transpose();
    const double limit = d == 0 ? 0.0 : ray_limit(model, theta, radius_cap, cut_shell);
    for (Eigen::Index e = 0; e < grid; ++e) {
      Eigen::VectorXd tail(h);
      double log_w = 0.0;
      Eigen::Index rest = e;
      for (int axis = n - 1; axis >= d; --axis) {
        const auto node = static_cast<std::size_t>(rest % counts.hermite);
        rest /= counts.hermite;
        tail[axis - d] = 2.0 * gh.nodes[node];
        log_w += log_gh[node];
      }
      // Along this ray and Hermite node, |v| >= shell means r >= lo.
      const double lo = std::min(limit, std::sqrt(std::max(0.0, shell * shell - tail.squaredNorm())));
      const bool empty = d == 0 ? tail.norm() < shell : lo >= limit;
      for (Eigen::Index j = 0; j < per; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        const double r = lo + 0.5 * (limit - lo) * (unit.nodes[jj] + 1.0);
        const double wr = d == 0 ? 1.0
                                 : 0.5 * (limit - lo) * unit.weights[jj] * std::pow(r, d - 1) *
                                       dirs.weights[di];
        TangentVector v{Eigen::VectorXd(n)};
        v.coords.head(d) = r * theta.head(d);
        v.coords.tail(h) = tail;
        const Eigen::Index row = (di * per + j) * grid + e;
        points.row(row) = v.coords.transpose();
        const bool inside = !empty && (m == 0 || v.coords.head(m).norm() < shell_radius);
        weights[row] = inside && model.in_omega(v)
                           ? norm * wr * model.jacobian_density(v) *
                                 std::exp(log_w - model.pulled_back_potential(v))
                           : 0.0;
      }
    }
  });
  return DiscreteMeasure(std::move(points), std::move(weights));
}

DiscreteMeasure discretize_pullback(const ShrinkerModel& model, const Scheme& scheme) {
  switch (scheme.kind) {
    case SchemeKind::Polar:
    {
      const Scheme resolved = resolve_scheme(model, scheme);
      return discretize_pullback(
          model, polar_counts(model.dimension(), resolved.resolution, resolved.polar_dims,
                              resolved.balanced),
          resolved.radius_cap, resolved.cut_shell, resolved.shell);
    }
    case SchemeKind::Lattice: return lattice_pullback(model, scheme);
    case SchemeKind::MonteCarlo: return monte_carlo_pullback(model, scheme);
  }
  throw Error(ErrorCode::Config, "unsupported scheme");
}

DiscreteMeasure discretize_gaussian(int n, const Scheme& scheme) {
  return discretize_pullback(ShrinkerModel::gaussian(n), scheme);
}

DiscreteMeasure discretize_manifold(const ShrinkerModel& model, int angular, int hermite) {
  if (angular < 2 || hermite < 1) {
    throw Error(ErrorCode::Config, "manifold rule needs angular >= 2 and hermite >= 1");
  }
  const int m = model.sphere_dim();
  const int k = model.euclidean_dim();
  const int n = model.dimension();
  const double rho = model.sphere_radius();

  // Sphere factor: geodesic polar coordinates (theta, direction) around the base direction.
  std::vector<Eigen::VectorXd> sphere_points;
  std::vector<double> sphere_weights;
  if (m == 0) {
    sphere_points.emplace_back(0);
    sphere_weights.push_back(1.0);
  } else {
    const numerics::Rule polar = numerics::gauss_legendre(angular, 0.0, std::numbers::pi);
    const SphereRule dirs = sphere_rule(m - 1, angular);
    for (std::size_t a = 0; a < polar.size(); ++a) {
      const double theta = polar.nodes[a];
      const double wa = polar.weights[a] * std::pow(rho, m) * std::pow(std::sin(theta), m - 1);
      for (Eigen::Index d = 0; d < dirs.nodes.rows(); ++d) {
        TangentVector v{Eigen::VectorXd::Zero(n)};
        v.coords.head(m) = rho * theta * dirs.nodes.row(d).transpose();
        sphere_points.push_back(model.exp_map(v).direction);
        sphere_weights.push_back(wa * dirs.weights[d]);
      }
    }
  }

  // Euclidean factor: Gauss-Hermite in x = y/2 absorbs e^{-|y|^2/4}.
  const numerics::Rule gh = numerics::gauss_hermite(hermite);
  long euclid_count = 1;
  for (int j = 0; j < k; ++j) euclid_count *= hermite;

  const auto count = static_cast<Eigen::Index>(sphere_points.size()) * euclid_count;
  const double norm = gaussian_normalizer(n) * std::exp(-model.normalization_shift());
  Eigen::MatrixXd points(count, model.embedding_dim());
  Eigen::VectorXd weights(count);
  Eigen::Index row = 0;
  for (std::size_t s = 0; s < sphere_points.size(); ++s) {
    for (long e = 0; e < euclid_count; ++e) {
      long rest = e;
      Eigen::VectorXd y(k);
      double w = norm * sphere_weights[s];
      for (int j = k - 1; j >= 0; --j) {
        const auto node = static_cast<std::size_t>(rest % hermite);
        rest /= hermite;
        y[j] = 2.0 * gh.nodes[node];
        w *= 2.0 * gh.weights[node];
      }
      points.row(row) << sphere_points[s].transpose(), y.transpose();
      weights[row] = w;
      ++row;
    }
  }
  return DiscreteMeasure(std::move(points), std::move(weights), PointSpace::Manifold, model);
}

}  // namespace shrinker_ot
