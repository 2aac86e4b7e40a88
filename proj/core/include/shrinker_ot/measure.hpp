#pragma once

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "shrinker_ot/models.hpp"

namespace shrinker_ot {

/// Tangent: rows are coordinates of vectors in T_pM (Euclidean cost).
/// Manifold: rows are embedded points of `model` (geodesic cost).
enum class PointSpace { Tangent, Manifold };

using PointRef = Eigen::Ref<const Eigen::VectorXd>;

/// Weighted point cloud. Atoms are the rows of points(). Zero weights are
/// dropped on construction, negative or non-finite weights rejected.
class DiscreteMeasure {
public:
  DiscreteMeasure(Eigen::MatrixXd points, Eigen::VectorXd weights,
                  PointSpace space = PointSpace::Tangent,
                  std::optional<ShrinkerModel> model = std::nullopt);

  Eigen::Index size() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }
  const Eigen::MatrixXd& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  Eigen::VectorXd point(Eigen::Index i) const { return points_.row(i).transpose(); }
  double weight(Eigen::Index i) const { return weights_[i]; }
  /// Sequential sum of the weights.
  double total_mass() const { return total_mass_; }

  PointSpace space() const { return space_; }
  const std::optional<ShrinkerModel>& model() const { return model_; }

  /// Weights divided by total_mass().
  DiscreteMeasure normalized() const;
  /// Same atoms with weights w_i * factor(x_i); atoms with factor 0 are dropped.
  DiscreteMeasure reweighted(const std::function<double(const PointRef&)>& factor) const;

  /// One atom per row: coordinates..., weight. Header x0,...,x{d-1},weight.
  void write_csv(std::ostream& out) const;

private:
  Eigen::MatrixXd points_;
  Eigen::VectorXd weights_;
  double total_mass_ = 0.0;
  PointSpace space_;
  std::optional<ShrinkerModel> model_;
};

struct Restriction {
  DiscreteMeasure measure;  // retained atoms, renormalized to mass 1
  /// Retained share of the input mass (exactly 1 when nothing is dropped).
  double retained_mass;
};

/// Keep atoms satisfying `keep`; throws EmptyRestriction if none survive.
Restriction restrict_measure(const DiscreteMeasure& measure,
                             const std::function<bool(const PointRef&)>& keep);

/// Tangent-space shell {|v| >= s}.
Restriction restrict_to_shell(const DiscreteMeasure& measure, double s);

/// sum_i w_i * integrand(x_i); a non-finite integrand value throws Numeric naming the atom.
double integrate(const DiscreteMeasure& measure,
                 const std::function<double(const PointRef&)>& integrand);

}  // namespace shrinker_ot
