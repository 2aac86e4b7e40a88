#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "shrinker_ot/measure.hpp"
#include "shrinker_ot/report.hpp"

namespace shrinker_ot {

enum class CostMetric { EuclideanTangent, Geodesic };

/// c_ij = d(x_i, y_j)^2. Geodesic needs two manifold measures of the same model,
/// EuclideanTangent two tangent measures; anything else throws Type.
Eigen::MatrixXd cost_matrix(const DiscreteMeasure& source, const DiscreteMeasure& target,
                            CostMetric metric);

/// Cost metric implied by the point space of the two measures.
CostMetric natural_metric(const DiscreteMeasure& source, const DiscreteMeasure& target);

struct PlanEntry {
  Eigen::Index i;
  Eigen::Index j;
  double mass;
};

/// Sparse transport plan; entries sorted by (i, j).
struct Coupling {
  std::vector<PlanEntry> entries;
  Eigen::VectorXd source_weights;
  Eigen::VectorXd target_weights;

  Eigen::VectorXd row_sums() const;
  Eigen::VectorXd column_sums() const;
  /// Largest absolute deviation of a row or column sum from its marginal.
  double max_marginal_violation() const;
  double objective(const Eigen::MatrixXd& cost) const;
  /// Sparse triplets i,j,mass with a header row.
  void write_csv(std::ostream& out) const;
};

enum class SolverKind { Exact, Sinkhorn };

struct SolverDiagnostics {
  long iterations = 0;
  double max_marginal_violation = 0.0;
  double duality_gap = 0.0;     // exact solver only
  double epsilon_final = 0.0;   // Sinkhorn only
  /// Sinkhorn: transport cost of the plan at the end of each epsilon stage.
  std::vector<double> stage_objectives;
};

struct TransportResult {
  double wasserstein = 0.0;
  double objective = 0.0;  // W^2 = sum pi_ij c_ij
  Coupling coupling;
  SolverKind solver = SolverKind::Exact;
  SolverDiagnostics diagnostics;
};

struct ExactOptions {
  std::size_t max_support = 4096;
  /// Costs are rounded to integers after multiplying by this factor.
  double cost_scale = 1e12;
  double mass_tolerance = 1e-9;
};

/// Network simplex on the complete bipartite graph of atoms.
TransportResult solve_exact(const DiscreteMeasure& source, const DiscreteMeasure& target,
                            const Eigen::MatrixXd& cost, const ExactOptions& options = {});
TransportResult solve_exact(const DiscreteMeasure& source, const DiscreteMeasure& target,
                            const ExactOptions& options = {});

struct SinkhornOptions {
  /// Geometric schedule from start to end, both relative to the mean cost.
  double epsilon_start = 1.0;
  double epsilon_end = 1e-3;
  int stages = 12;
  /// Total-variation marginal violation required at the final stage.
  double tolerance = 1e-8;
  double stage_tolerance = 1e-5;
  long max_iterations = 200000;
  double mass_tolerance = 1e-9;
};

/// Log-domain Sinkhorn with epsilon annealing. The reported objective is the
/// unregularized cost of the final plan.
TransportResult solve_sinkhorn(const DiscreteMeasure& source, const DiscreteMeasure& target,
                               const Eigen::MatrixXd& cost, const SinkhornOptions& options = {});

/// Squared W2 between measures on a common line, by quantile matching.
double wasserstein_1d_squared(const DiscreteMeasure& source, const DiscreteMeasure& target);
double wasserstein_1d(const DiscreteMeasure& source, const DiscreteMeasure& target);

/// H(eta|nu) = sum eta_i log(eta_i / nu_i) after normalizing both; atoms are
/// matched by identical coordinates. An eta atom absent from nu throws AbsoluteContinuity.
double relative_entropy(const DiscreteMeasure& eta, const DiscreteMeasure& nu);

using GradientField = std::function<Eigen::VectorXd(const PointRef&)>;

/// I(eta|nu) = sum eta_i |grad log(d eta/d nu)(x_i)|^2 with eta normalized.
double fisher_information(const DiscreteMeasure& eta, const GradientField& grad_log_ratio);

/// Central-difference gradient of a scalar function.
GradientField finite_difference_gradient(std::function<double(const PointRef&)> f,
                                         double step = 1e-5);

struct InequalityOptions {
  /// Relative slack granted to discretized comparisons: tol = rel * max(1, |rhs|).
  double relative_tolerance = 1e-3;
  ExactOptions exact;
};

/// W^2(eta, nu) <= (2/rho) H(eta|nu), with W from solve_exact in the natural metric.
BoundReport check_talagrand(const DiscreteMeasure& eta, const DiscreteMeasure& nu, double rho,
                            const InequalityOptions& options = {});

/// H(eta|nu) <= I(eta|nu) / (2 rho).
BoundReport check_lsi(const DiscreteMeasure& eta, const DiscreteMeasure& nu, double rho,
                      const GradientField& grad_log_ratio, const InequalityOptions& options = {});

}  // namespace shrinker_ot
