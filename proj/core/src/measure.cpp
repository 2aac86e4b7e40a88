#include "shrinker_ot/measure.hpp"

#include <fmt/format.h>

#include <cmath>
#include <ostream>

#include "shrinker_ot/error.hpp"

namespace shrinker_ot {
namespace {

double sequential_sum(const Eigen::VectorXd& w) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) total += w[i];
  return total;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(Eigen::MatrixXd points, Eigen::VectorXd weights,
                                 PointSpace space, std::optional<ShrinkerModel> model)
    : space_(space), model_(std::move(model)) {
  if (points.rows() != weights.size()) {
    throw Error(ErrorCode::Precondition, fmt::format("{} points but {} weights", points.rows(),
                                                     weights.size()));
  }
  if (space_ == PointSpace::Manifold) {
    if (!model_) throw Error(ErrorCode::Type, "manifold measure needs a model");
    if (points.cols() != model_->embedding_dim()) {
      throw Error(ErrorCode::Type, "manifold points do not match the model's embedding");
    }
  }
  Eigen::Index kept = 0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::Precondition, fmt::format("atom {} has invalid weight {}", i, w));
    }
    if (w > 0.0) ++kept;
  }
  if (kept == 0) throw Error(ErrorCode::Precondition, "measure has no atom of positive weight");

  if (kept == weights.size()) {
    points_ = std::move(points);
    weights_ = std::move(weights);
  } else {
    points_.resize(kept, points.cols());
    weights_.resize(kept);
    Eigen::Index j = 0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
      if (weights[i] > 0.0) {
        points_.row(j) = points.row(i);
        weights_[j] = weights[i];
        ++j;
      }
    }
  }
  total_mass_ = sequential_sum(weights_);
}

DiscreteMeasure DiscreteMeasure::normalized() const {
  Eigen::VectorXd w = weights_ / total_mass_;
  return DiscreteMeasure(points_, std::move(w), space_, model_);
}

DiscreteMeasure DiscreteMeasure::reweighted(
    const std::function<double(const PointRef&)>& factor) const {
  Eigen::VectorXd w(size());
  for (Eigen::Index i = 0; i < size(); ++i) {
    const double f = factor(points_.row(i).transpose());
    if (!std::isfinite(f) || f < 0.0) {
      throw Error(ErrorCode::Numeric, fmt::format("reweighting factor {} at atom {}", f, i));
    }
    w[i] = weights_[i] * f;
  }
  return DiscreteMeasure(points_, std::move(w), space_, model_);
}

void DiscreteMeasure::write_csv(std::ostream& out) const {
  for (Eigen::Index j = 0; j < dim(); ++j) out << 'x' << j << ',';
  out << "weight\n";
  for (Eigen::Index i = 0; i < size(); ++i) {
    for (Eigen::Index j = 0; j < dim(); ++j) out << fmt::format("{:.17g},", points_(i, j));
    out << fmt::format("{:.17g}\n", weights_[i]);
  }
}

Restriction restrict_measure(const DiscreteMeasure& measure,
                             const std::function<bool(const PointRef&)>& keep) {
  std::vector<Eigen::Index> kept;
  kept.reserve(measure.size());
  for (Eigen::Index i = 0; i < measure.size(); ++i) {
    if (keep(measure.points().row(i).transpose())) kept.push_back(i);
  }
  if (kept.empty()) throw Error(ErrorCode::EmptyRestriction, "restriction retains no atom");

  const auto count = static_cast<Eigen::Index>(kept.size());
  Eigen::MatrixXd points(count, measure.dim());
  Eigen::VectorXd weights(count);
  for (Eigen::Index j = 0; j < count; ++j) {
    points.row(j) = measure.points().row(kept[j]);
    weights[j] = measure.weight(kept[j]);
  }
  const double retained = sequential_sum(weights);
  weights /= retained;
  return Restriction{DiscreteMeasure(std::move(points), std::move(weights), measure.space(),
                                     measure.model()),
                     retained / measure.total_mass()};
}

Restriction restrict_to_shell(const DiscreteMeasure& measure, double s) {
  if (measure.space() != PointSpace::Tangent) {
    throw Error(ErrorCode::Type, "shell restriction needs a tangent-space measure");
  }
  return restrict_measure(measure, [s](const PointRef& v) { return v.norm() >= s; });
}

double integrate(const DiscreteMeasure& measure,
                 const std::function<double(const PointRef&)>& integrand) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < measure.size(); ++i) {
    const double value = integrand(measure.points().row(i).transpose());
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::Numeric,
                  fmt::format("integrand is {} at atom {}", value, i));
    }
    total += measure.weight(i) * value;
  }
  return total;
}

}  // namespace shrinker_ot
