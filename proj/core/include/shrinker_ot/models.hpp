#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace shrinker_ot {

struct BoundReport;

enum class ModelKind { Gaussian, Cylinder, Sphere };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

/// A point of a product S^m(rho) x R^k. The sphere factor is stored as a unit
/// direction in R^{m+1} (empty when m == 0); the radius lives on the model.
struct ManifoldPoint {
  Eigen::VectorXd direction;
  Eigen::VectorXd euclidean;
};

/// Coordinates of v in T_pM in the model's orthonormal frame at p: the first m
/// entries span the sphere factor, the last k the Euclidean factor.
struct TangentVector {
  Eigen::VectorXd coords;

  double norm() const { return coords.norm(); }
};

/// Closed-form 1-Ricci shrinkers (Ric + Hess f = g/2), all written as
/// S^m(rho) x R^k with rho^2 = 2(m-1) and raw potential |y|^2/4:
///   Gaussian(n)    m = 0, k = n
///   Cylinder(n, k) m = n-k >= 2, k >= 1
///   Sphere(n)      m = n, k = 0
/// The potential is shifted so the weighted volume is exactly one.
///
/// Immutable after construction; every method is const and thread-safe.
class ShrinkerModel {
public:
  static ShrinkerModel gaussian(int n);
  static ShrinkerModel cylinder(int n, int k);
  static ShrinkerModel sphere(int n);

  /// Same model with the base point p moved to `p`.
  ShrinkerModel with_base_point(const ManifoldPoint& p) const;

  ModelKind kind() const { return kind_; }
  std::string name() const;
  int dimension() const { return sphere_dim_ + euclidean_dim_; }
  int sphere_dim() const { return sphere_dim_; }
  int euclidean_dim() const { return euclidean_dim_; }
  /// Ambient coordinate count of a ManifoldPoint: (m+1 if m>0) + k.
  int embedding_dim() const;

  double sphere_radius() const { return sphere_radius_; }
  /// log V_f of the raw potential |y|^2/4; added to every potential value.
  double normalization_shift() const { return normalization_shift_; }
  /// Constant C of R + |grad f|^2 = f + C for the normalized potential; equals -mu.
  double hamilton_constant() const;
  /// Entropy through Hamilton's identity with V_f = 1: mu = -C.
  double hamilton_entropy() const { return -hamilton_constant(); }

  const ManifoldPoint& base_point() const { return base_; }
  /// Radius pi*rho of the open set Omega in sphere directions; +inf without a sphere factor.
  double cut_radius() const;

  void validate(const ManifoldPoint& x) const;
  ManifoldPoint minimum_point() const;

  double potential(const ManifoldPoint& x) const;
  double raw_potential(const ManifoldPoint& x) const;
  /// Gradient of f at x in the product frame at x (sphere block, Euclidean block).
  Eigen::VectorXd potential_gradient(const ManifoldPoint& x) const;
  double scalar_curvature(const ManifoldPoint& x) const;

  double geodesic_distance(const ManifoldPoint& x, const ManifoldPoint& y) const;
  double distance_from_base(const ManifoldPoint& x) const { return geodesic_distance(base_, x); }

  bool in_omega(const TangentVector& v) const;
  ManifoldPoint exp_map(const TangentVector& v) const;
  TangentVector log_map(const ManifoldPoint& x) const;

  /// |det d(exp_p)_v| = dv_gbar / dv_g0 at v.
  double jacobian_density(const TangentVector& v) const;
  /// f(exp_p(v)) without building the manifold point.
  double pulled_back_potential(const TangentVector& v) const;

  /// Flatten a point into embedding coordinates [direction | euclidean] and back.
  Eigen::VectorXd embed(const ManifoldPoint& x) const;
  ManifoldPoint unembed(const Eigen::Ref<const Eigen::VectorXd>& coords) const;

private:
  ShrinkerModel(ModelKind kind, int sphere_dim, int euclidean_dim);

  void set_base(const ManifoldPoint& p);
  Eigen::Ref<const Eigen::VectorXd> sphere_part(const TangentVector& v) const;
  Eigen::Ref<const Eigen::VectorXd> euclidean_part(const TangentVector& v) const;
  double sphere_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

  ModelKind kind_;
  int sphere_dim_;
  int euclidean_dim_;
  double sphere_radius_ = 0.0;
  double normalization_shift_ = 0.0;
  ManifoldPoint base_;
  // Columns 0..m-1: orthonormal frame of T_q S^m at the base direction q; column m: q.
  Eigen::MatrixXd sphere_frame_;
};

/// Samples of the area-element bound J(v) <= e^{f(p) - mu} on a polar (r, theta)
/// grid inside Omega. `radial` radii per direction, `directions` unit vectors.
struct AreaElementGrid {
  int radial = 100;
  int directions = 100;
  double max_radius = 14.0;
  /// Smallest radius sampled, as a fraction of the per-direction limit.
  double min_fraction = 0.0;
};

BoundReport area_element_bound_check(const ShrinkerModel& model, const AreaElementGrid& grid);

/// Deterministic quasi-uniform unit vectors in R^dim (spiral points for dim 3,
/// equally spaced angles for dim 2, a seeded Gaussian draw otherwise).
std::vector<Eigen::VectorXd> spread_directions(int dim, int count);

}  // namespace shrinker_ot
