#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "shrinker_ot/error.hpp"
#include "shrinker_ot/parallel.hpp"
#include "shrinker_ot/transport.hpp"

namespace shrinker_ot {

CostMetric natural_metric(const DiscreteMeasure& source, const DiscreteMeasure& target) {
  if (source.space() != target.space()) {
    throw Error(ErrorCode::Type, "cannot couple a tangent measure with a manifold measure");
  }
  return source.space() == PointSpace::Tangent ? CostMetric::EuclideanTangent
                                               : CostMetric::Geodesic;
}

Eigen::MatrixXd cost_matrix(const DiscreteMeasure& source, const DiscreteMeasure& target,
                            CostMetric metric) {
  const Eigen::Index n0 = source.size();
  const Eigen::Index n1 = target.size();
  Eigen::MatrixXd cost(n0, n1);

  if (metric == CostMetric::EuclideanTangent) {
    if (source.space() != PointSpace::Tangent || target.space() != PointSpace::Tangent ||
        source.dim() != target.dim()) {
      throw Error(ErrorCode::Type, "euclidean cost needs tangent measures of equal dimension");
    }
    parallel_for(0, static_cast<std::size_t>(n0), [&](std::size_t idx) {
      const auto i = static_cast<Eigen::Index>(idx);
      for (Eigen::Index j = 0; j < n1; ++j) {
        cost(i, j) = (source.points().row(i) - target.points().row(j)).squaredNorm();
      }
    });
    return cost;
  }

  if (source.space() != PointSpace::Manifold || target.space() != PointSpace::Manifold ||
      source.model()->name() != target.model()->name()) {
    throw Error(ErrorCode::Type, "geodesic cost needs manifold measures of the same model");
  }
  const ShrinkerModel& model = *source.model();
  std::vector<ManifoldPoint> xs, ys;
  xs.reserve(n0);
  ys.reserve(n1);
  for (Eigen::Index i = 0; i < n0; ++i) xs.push_back(model.unembed(source.point(i)));
  for (Eigen::Index j = 0; j < n1; ++j) ys.push_back(model.unembed(target.point(j)));
  parallel_for(0, static_cast<std::size_t>(n0), [&](std::size_t idx) {
    const auto i = static_cast<Eigen::Index>(idx);
    for (Eigen::Index j = 0; j < n1; ++j) {
      const double d = model.geodesic_distance(xs[idx], ys[j]);
      cost(i, j) = d * d;
    }
  });
  return cost;
}

Eigen::VectorXd Coupling::row_sums() const {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(source_weights.size());
  for (const PlanEntry& e : entries) sums[e.i] += e.mass;
  return sums;
}

Eigen::VectorXd Coupling::column_sums() const {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(target_weights.size());
  for (const PlanEntry& e : entries) sums[e.j] += e.mass;
  return sums;
}

double Coupling::max_marginal_violation() const {
  const double rows = (row_sums() - source_weights).cwiseAbs().maxCoeff();
  const double cols = (column_sums() - target_weights).cwiseAbs().maxCoeff();
  return std::max(rows, cols);
}

double Coupling::objective(const Eigen::MatrixXd& cost) const {
  double total = 0.0;
  for (const PlanEntry& e : entries) total += e.mass * cost(e.i, e.j);
  return total;
}

void Coupling::write_csv(std::ostream& out) const {
  out << "i,j,mass\n";
  for (const PlanEntry& e : entries) out << fmt::format("{},{},{:.17g}\n", e.i, e.j, e.mass);
}

namespace {

// Scalar coordinates of all atoms along a common line, or Precondition.
void project_to_line(const DiscreteMeasure& a, const DiscreteMeasure& b, std::vector<double>& ta,
                     std::vector<double>& tb) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::Type, "measures live in different dimensions");
  const Eigen::VectorXd origin = a.point(0);
  Eigen::VectorXd direction = Eigen::VectorXd::Zero(a.dim());
  double scale = 0.0;
  for (const DiscreteMeasure* m : {&a, &b}) {
    for (Eigen::Index i = 0; i < m->size(); ++i) {
      const Eigen::VectorXd d = m->point(i) - origin;
      scale = std::max(scale, d.norm());
      if (direction.isZero(0.0) && d.norm() > 0.0) direction = d.normalized();
    }
  }
  const double tol = 1e-10 * std::max(1.0, scale);
  const auto project = [&](const DiscreteMeasure& m, std::vector<double>& t) {
    t.resize(m.size());
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const Eigen::VectorXd d = m.point(i) - origin;
      t[i] = d.dot(direction);
      if ((d - t[i] * direction).norm() > tol) {
        throw Error(ErrorCode::Precondition, "support is not collinear");
      }
    }
  };
  project(a, ta);
  project(b, tb);
}

}  // namespace

double wasserstein_1d_squared(const DiscreteMeasure& source, const DiscreteMeasure& target) {
  std::vector<double> ts, tt;
  project_to_line(source, target, ts, tt);
  std::vector<std::size_t> is(ts.size()), it(tt.size());
  std::iota(is.begin(), is.end(), 0);
  std::iota(it.begin(), it.end(), 0);
  std::stable_sort(is.begin(), is.end(), [&](auto x, auto y) { return ts[x] < ts[y]; });
  std::stable_sort(it.begin(), it.end(), [&](auto x, auto y) { return tt[x] < tt[y]; });

  const double ms = source.total_mass();
  const double mt = target.total_mass();
  std::size_t p = 0, q = 0;
  double left_s = source.weight(static_cast<Eigen::Index>(is[0])) / ms;
  double left_t = target.weight(static_cast<Eigen::Index>(it[0])) / mt;
  double total = 0.0;
  while (p < is.size() && q < it.size()) {
    const double moved = std::min(left_s, left_t);
    const double gap = ts[is[p]] - tt[it[q]];
    total += moved * gap * gap;
    left_s -= moved;
    left_t -= moved;
    // Advance whichever side is exhausted; at the last atom keep the remainder.
    if (left_s <= left_t) {
      if (++p < is.size()) left_s = source.weight(static_cast<Eigen::Index>(is[p])) / ms;
    } else {
      if (++q < it.size()) left_t = target.weight(static_cast<Eigen::Index>(it[q])) / mt;
    }
  }
  return total;
}

double wasserstein_1d(const DiscreteMeasure& source, const DiscreteMeasure& target) {
  return std::sqrt(wasserstein_1d_squared(source, target));
}

}  // namespace shrinker_ot
