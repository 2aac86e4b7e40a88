#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "shrinker_ot/error.hpp"
#include "shrinker_ot/parallel.hpp"
#include "shrinker_ot/transport.hpp"

namespace shrinker_ot {
namespace {

// exp(x), with the underflow range short-circuited (glibc takes a slow errno path there).
inline double exp_or_zero(double x) { return x < -745.0 ? 0.0 : std::exp(x); }

// f_i = eps log a_i - eps LSE_j((g_j - C_ij)/eps), one row at a time.
void update_rows(const Eigen::MatrixXd& cost, const Eigen::VectorXd& log_a,
                 const Eigen::VectorXd& g, double eps, Eigen::VectorXd& f) {
  parallel_for(0, static_cast<std::size_t>(cost.rows()), [&](std::size_t idx) {
    const auto i = static_cast<Eigen::Index>(idx);
    double peak = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < cost.cols(); ++j) peak = std::max(peak, (g[j] - cost(i, j)) / eps);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < cost.cols(); ++j) sum += exp_or_zero((g[j] - cost(i, j)) / eps - peak);
    f[i] = eps * (log_a[i] - peak - std::log(sum));
  });
}

void update_columns(const Eigen::MatrixXd& cost, const Eigen::VectorXd& log_b,
                    const Eigen::VectorXd& f, double eps, Eigen::VectorXd& g) {
  parallel_for(0, static_cast<std::size_t>(cost.cols()), [&](std::size_t idx) {
    const auto j = static_cast<Eigen::Index>(idx);
    double peak = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < cost.rows(); ++i) peak = std::max(peak, (f[i] - cost(i, j)) / eps);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < cost.rows(); ++i) sum += exp_or_zero((f[i] - cost(i, j)) / eps - peak);
    g[j] = eps * (log_b[j] - peak - std::log(sum));
  });
}

Eigen::MatrixXd plan(const Eigen::MatrixXd& cost, const Eigen::VectorXd& f,
                     const Eigen::VectorXd& g, double eps) {
  Eigen::MatrixXd p(cost.rows(), cost.cols());
  for (Eigen::Index j = 0; j < cost.cols(); ++j) {
    for (Eigen::Index i = 0; i < cost.rows(); ++i) p(i, j) = exp_or_zero((f[i] + g[j] - cost(i, j)) / eps);
  }
  return p;
}

// Scaling form of the plan: P = diag(u) K diag(v) with K = exp((f + g - C) / eps).
// Scalings are folded into the potentials (f += eps log u) whenever they drift
// far from 1, so K stays representable.
struct ScaledKernel {
  Eigen::MatrixXd kernel;
  Eigen::VectorXd u;
  Eigen::VectorXd v;

  void rebuild(const Eigen::MatrixXd& cost, const Eigen::VectorXd& f, const Eigen::VectorXd& g,
               double eps) {
    kernel = plan(cost, f, g, eps);
    u = Eigen::VectorXd::Ones(f.size());
    v = Eigen::VectorXd::Ones(g.size());
  }

  void absorb(Eigen::VectorXd& f, Eigen::VectorXd& g, double eps) const {
    f.array() += eps * u.array().log();
    g.array() += eps * v.array().log();
  }
};

constexpr double kAbsorbThreshold = 1e50;

}  // namespace

TransportResult solve_sinkhorn(const DiscreteMeasure& source, const DiscreteMeasure& target,
                               const Eigen::MatrixXd& cost, const SinkhornOptions& options) {
  if (cost.rows() != source.size() || cost.cols() != target.size()) {
    throw Error(ErrorCode::Precondition, "cost matrix does not match the measures");
  }
  if (std::abs(source.total_mass() - 1.0) > options.mass_tolerance ||
      std::abs(target.total_mass() - 1.0) > options.mass_tolerance) {
    throw Error(ErrorCode::Precondition, "transport needs probability measures");
  }
  if (!(options.epsilon_start > 0.0) || !(options.epsilon_end > 0.0) || options.stages < 1) {
    throw Error(ErrorCode::Config, "epsilon schedule must be positive with at least one stage");
  }
  const Eigen::VectorXd& a = source.weights();
  const Eigen::VectorXd& b = target.weights();
  const Eigen::VectorXd log_a = a.array().log();
  const Eigen::VectorXd log_b = b.array().log();
  const double mean_cost = std::max(cost.mean(), std::numeric_limits<double>::min());

  Eigen::VectorXd f = Eigen::VectorXd::Zero(a.size());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(b.size());
  TransportResult result;
  result.solver = SolverKind::Sinkhorn;
  long iterations = 0;
  double eps = options.epsilon_start * mean_cost;
  double violation = std::numeric_limits<double>::infinity();

  for (int stage = 0; stage < options.stages; ++stage) {
    const double t = options.stages == 1 ? 1.0 : static_cast<double>(stage) / (options.stages - 1);
    eps = mean_cost * options.epsilon_start *
          std::pow(options.epsilon_end / options.epsilon_start, t);
    const bool last = stage + 1 == options.stages;
    const double target_violation = last ? options.tolerance : options.stage_tolerance;
    violation = std::numeric_limits<double>::infinity();
    // One log-domain sweep adapts the potentials to the new eps; then scaling
    // iterations on the kernel, with the row update measuring the row error.
    update_rows(cost, log_a, g, eps, f);
    update_columns(cost, log_b, f, eps, g);
    ++iterations;
    ScaledKernel sk;
    sk.rebuild(cost, f, g, eps);
    while (true) {
      const Eigen::VectorXd kv = sk.kernel * sk.v;
      const Eigen::VectorXd u_next = a.cwiseQuotient(kv);
      // Rows of diag(u) K diag(v) are a_i u_i / u_next_i; columns are exact here.
      violation = (a.array() * (sk.u.array() / u_next.array() - 1.0).abs()).sum();
      if (violation < target_violation) break;
      if (iterations >= options.max_iterations) {
        throw Error(ErrorCode::Convergence,
                    fmt::format("Sinkhorn reached {} iterations at eps {:.3g} with marginal "
                                "violation {:.3g}",
                                iterations, eps, violation));
      }
      if (!u_next.allFinite() || u_next.maxCoeff() > kAbsorbThreshold ||
          u_next.minCoeff() < 1.0 / kAbsorbThreshold) {
        // Fall back to a log-domain sweep and rebuild the kernel around it.
        sk.absorb(f, g, eps);
        update_rows(cost, log_a, g, eps, f);
        update_columns(cost, log_b, f, eps, g);
        ++iterations;
        sk.rebuild(cost, f, g, eps);
        continue;
      }
      sk.u = u_next;
      sk.v = b.cwiseQuotient(sk.kernel.transpose() * sk.u);
      ++iterations;
      if (!sk.v.allFinite() || sk.v.maxCoeff() > kAbsorbThreshold ||
          sk.v.minCoeff() < 1.0 / kAbsorbThreshold) {
        sk.absorb(f, g, eps);
        update_columns(cost, log_b, f, eps, g);
        sk.rebuild(cost, f, g, eps);
      }
    }
    sk.absorb(f, g, eps);
    result.diagnostics.stage_objectives.push_back(plan(cost, f, g, eps).cwiseProduct(cost).sum());
  }

  const Eigen::MatrixXd p = plan(cost, f, g, eps);
  result.coupling.source_weights = a;
  result.coupling.target_weights = b;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (p(i, j) > 0.0) result.coupling.entries.push_back({i, j, p(i, j)});
    }
  }
  result.objective = result.coupling.objective(cost);
  result.wasserstein = std::sqrt(std::max(0.0, result.objective));
  result.diagnostics.iterations = iterations;
  result.diagnostics.epsilon_final = eps;
  result.diagnostics.max_marginal_violation = result.coupling.max_marginal_violation();
  return result;
}

}  // namespace shrinker_ot
