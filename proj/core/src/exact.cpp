#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "network_simplex.hpp"
#include "shrinker_ot/error.hpp"
#include "shrinker_ot/transport.hpp"

namespace shrinker_ot {
namespace {

constexpr long kMaxPivots = 200'000'000;

void check_inputs(const DiscreteMeasure& source, const DiscreteMeasure& target,
                  const Eigen::MatrixXd& cost, double mass_tolerance) {
  if (cost.rows() != source.size() || cost.cols() != target.size()) {
    throw Error(ErrorCode::Precondition,
                fmt::format("cost matrix is {}x{}, measures have {} and {} atoms", cost.rows(),
                            cost.cols(), source.size(), target.size()));
  }
  if (std::abs(source.total_mass() - 1.0) > mass_tolerance ||
      std::abs(target.total_mass() - 1.0) > mass_tolerance) {
    throw Error(ErrorCode::Precondition,
                fmt::format("transport needs probability measures (masses {:.17g}, {:.17g})",
                            source.total_mass(), target.total_mass()));
  }
  if (!cost.allFinite() || cost.minCoeff() < 0.0) {
    throw Error(ErrorCode::Numeric, "cost matrix must be finite and nonnegative");
  }
}

}  // namespace

TransportResult solve_exact(const DiscreteMeasure& source, const DiscreteMeasure& target,
                            const Eigen::MatrixXd& cost, const ExactOptions& options) {
  const auto n0 = static_cast<std::size_t>(source.size());
  const auto n1 = static_cast<std::size_t>(target.size());
  if (std::max(n0, n1) > options.max_support) {
    throw Error(ErrorCode::Capacity, fmt::format("support sizes {} x {} exceed the cap {}", n0, n1,
                                                 options.max_support));
  }
  check_inputs(source, target, cost, options.mass_tolerance);
  const double max_cost = cost.maxCoeff();
  if (max_cost * options.cost_scale > 9.0e18) {
    throw Error(ErrorCode::Capacity, "scaled costs overflow 64-bit integers; lower cost_scale");
  }

  std::vector<std::int64_t> scaled(n0 * n1);
  for (std::size_t i = 0; i < n0; ++i) {
    for (std::size_t j = 0; j < n1; ++j) {
      scaled[i * n1 + j] = std::llround(cost(static_cast<Eigen::Index>(i),
                                             static_cast<Eigen::Index>(j)) * options.cost_scale);
    }
  }
  std::vector<double> supply(source.weights().data(), source.weights().data() + n0);
  std::vector<double> demand(target.weights().data(), target.weights().data() + n1);

  detail::NetworkSimplex simplex(std::move(supply), std::move(demand), scaled);
  if (!simplex.run(kMaxPivots)) {
    throw Error(ErrorCode::Convergence,
                fmt::format("network simplex stopped after {} pivots", simplex.iterations()));
  }

  TransportResult result;
  result.solver = SolverKind::Exact;
  result.coupling.source_weights = source.weights();
  result.coupling.target_weights = target.weights();
  for (const auto& f : simplex.flows()) result.coupling.entries.push_back({f.i, f.j, f.mass});
  std::sort(result.coupling.entries.begin(), result.coupling.entries.end(),
            [](const PlanEntry& a, const PlanEntry& b) {
              return a.i != b.i ? a.i < b.i : a.j < b.j;
            });
  result.objective = result.coupling.objective(cost);
  result.wasserstein = std::sqrt(std::max(0.0, result.objective));
  result.diagnostics.iterations = simplex.iterations();
  result.diagnostics.max_marginal_violation = result.coupling.max_marginal_violation();
  const long double gap = simplex.primal_objective() - simplex.dual_objective();
  result.diagnostics.duality_gap =
      static_cast<double>(std::abs(gap)) / options.cost_scale;
  if (simplex.artificial_flow() > options.mass_tolerance) {
    throw Error(ErrorCode::Precondition, "source and target masses do not balance");
  }
  return result;
}

TransportResult solve_exact(const DiscreteMeasure& source, const DiscreteMeasure& target,
                            const ExactOptions& options) {
  return solve_exact(source, target, cost_matrix(source, target, natural_metric(source, target)),
                     options);
}

}  // namespace shrinker_ot
