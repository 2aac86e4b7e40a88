#include <fmt/format.h>

#include <cmath>
#include <map>
#include <vector>

#include "shrinker_ot/error.hpp"
#include "shrinker_ot/transport.hpp"

namespace shrinker_ot {
namespace {

std::vector<double> key_of(const DiscreteMeasure& m, Eigen::Index i) {
  std::vector<double> key(static_cast<std::size_t>(m.dim()));
  for (Eigen::Index k = 0; k < m.dim(); ++k) key[static_cast<std::size_t>(k)] = m.points()(i, k);
  return key;
}

}  // namespace

double relative_entropy(const DiscreteMeasure& eta, const DiscreteMeasure& nu) {
  if (eta.dim() != nu.dim() || eta.space() != nu.space()) {
    throw Error(ErrorCode::Type, "relative entropy needs measures on the same space");
  }
  std::map<std::vector<double>, Eigen::Index> index;
  for (Eigen::Index j = 0; j < nu.size(); ++j) index.emplace(key_of(nu, j), j);

  double total = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const auto it = index.find(key_of(eta, i));
    if (it == index.end()) {
      throw Error(ErrorCode::AbsoluteContinuity,
                  fmt::format("eta atom {} carries mass where nu has none", i));
    }
    const double p = eta.weight(i) / eta.total_mass();
    const double q = nu.weight(it->second) / nu.total_mass();
    total += p * std::log(p / q);
  }
  return total;
}

double fisher_information(const DiscreteMeasure& eta, const GradientField& grad_log_ratio) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const Eigen::VectorXd g = grad_log_ratio(eta.points().row(i).transpose());
    if (!g.allFinite()) {
      throw Error(ErrorCode::Numeric, fmt::format("non-finite gradient at atom {}", i));
    }
    total += eta.weight(i) / eta.total_mass() * g.squaredNorm();
  }
  return total;
}

GradientField finite_difference_gradient(std::function<double(const PointRef&)> f, double step) {
  return [f = std::move(f), step](const PointRef& x) {
    Eigen::VectorXd grad(x.size());
    Eigen::VectorXd probe = x;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      probe[k] = x[k] + step;
      const double hi = f(probe);
      probe[k] = x[k] - step;
      const double lo = f(probe);
      probe[k] = x[k];
      grad[k] = (hi - lo) / (2.0 * step);
    }
    return grad;
  };
}

BoundReport check_talagrand(const DiscreteMeasure& eta, const DiscreteMeasure& nu, double rho,
                            const InequalityOptions& options) {
  if (!(rho > 0.0)) throw Error(ErrorCode::Precondition, "rho must be positive");
  const double h = relative_entropy(eta, nu);
  const DiscreteMeasure eta1 = eta.normalized();
  const DiscreteMeasure nu1 = nu.normalized();
  const TransportResult ot = solve_exact(eta1, nu1, options.exact);

  BoundReport report;
  report.theorem_id = "talagrand";
  report.lhs = ot.objective;
  report.rhs = 2.0 / rho * h;
  report.tolerance = options.relative_tolerance * std::max(1.0, std::abs(report.rhs));
  report.constants.set("rho", rho);
  report.constants.set("W2_squared", ot.objective);
  report.constants.set("relative_entropy", h);
  report.scheme = "common-grid";
  report.discretization.set("eta_atoms", static_cast<double>(eta1.size()));
  report.discretization.set("nu_atoms", static_cast<double>(nu1.size()));
  report.discretization.set("pivots", static_cast<double>(ot.diagnostics.iterations));
  report.discretization.set("duality_gap", ot.diagnostics.duality_gap);
  report.discretization.set("marginal_violation", ot.diagnostics.max_marginal_violation);
  report.finalize();
  return report;
}

BoundReport check_lsi(const DiscreteMeasure& eta, const DiscreteMeasure& nu, double rho,
                      const GradientField& grad_log_ratio, const InequalityOptions& options) {
  if (!(rho > 0.0)) throw Error(ErrorCode::Precondition, "rho must be positive");
  const double h = relative_entropy(eta, nu);
  const double info = fisher_information(eta, grad_log_ratio);

  BoundReport report;
  report.theorem_id = "lsi";
  report.lhs = h;
  report.rhs = info / (2.0 * rho);
  report.tolerance = options.relative_tolerance * std::max(1.0, std::abs(report.rhs));
  report.constants.set("rho", rho);
  report.constants.set("relative_entropy", h);
  report.constants.set("fisher_information", info);
  report.scheme = "common-grid";
  report.discretization.set("eta_atoms", static_cast<double>(eta.size()));
  report.discretization.set("nu_atoms", static_cast<double>(nu.size()));
  report.finalize();
  return report;
}

}  // namespace shrinker_ot
