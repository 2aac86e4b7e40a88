#include "shrinker_ot/models.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "shrinker_ot/error.hpp"
#include "shrinker_ot/numerics.hpp"
#include "shrinker_ot/report.hpp"

namespace shrinker_ot {
namespace {

constexpr double kUnitNormTolerance = 1e-10;
// Angular distance to the antipode below which a point counts as on the cut locus.
constexpr double kCutTolerance = 1e-9;

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Gaussian: return "gaussian";
    case ModelKind::Cylinder: return "cylinder";
    case ModelKind::Sphere: return "sphere";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "gaussian") return ModelKind::Gaussian;
  if (name == "cylinder") return ModelKind::Cylinder;
  if (name == "sphere") return ModelKind::Sphere;
  throw Error(ErrorCode::Config, "unknown model '" + name + "' (expected gaussian, cylinder or sphere)");
}

ShrinkerModel::ShrinkerModel(ModelKind kind, int sphere_dim, int euclidean_dim)
    : kind_(kind), sphere_dim_(sphere_dim), euclidean_dim_(euclidean_dim) {
  const int m = sphere_dim_;
  if (m > 0) {
    sphere_radius_ = std::sqrt(2.0 * (m - 1));
    normalization_shift_ = -0.5 * m * std::log(4.0 * std::numbers::pi) +
                           std::log(numerics::sphere_area(m)) + m * std::log(sphere_radius_);
  }
  ManifoldPoint p;
  if (m > 0) {
    p.direction = Eigen::VectorXd::Zero(m + 1);
    p.direction[m] = 1.0;
  }
  p.euclidean = Eigen::VectorXd::Zero(euclidean_dim_);
  set_base(p);
}

ShrinkerModel ShrinkerModel::gaussian(int n) {
  if (n < 1) throw Error(ErrorCode::Precondition, "gaussian model needs n >= 1");
  return ShrinkerModel(ModelKind::Gaussian, 0, n);
}

ShrinkerModel ShrinkerModel::cylinder(int n, int k) {
  if (n < 2 || k < 1 || n - k < 2) {
    throw Error(ErrorCode::Precondition,
                fmt::format("cylinder needs n >= 2, k >= 1 and n - k >= 2 (got n={}, k={})", n, k));
  }
  return ShrinkerModel(ModelKind::Cylinder, n - k, k);
}

ShrinkerModel ShrinkerModel::sphere(int n) {
  if (n < 2) throw Error(ErrorCode::Precondition, "sphere model needs n >= 2");
  return ShrinkerModel(ModelKind::Sphere, n, 0);
}

ShrinkerModel ShrinkerModel::with_base_point(const ManifoldPoint& p) const {
  ShrinkerModel copy = *this;
  copy.set_base(p);
  return copy;
}

std::string ShrinkerModel::name() const {
  switch (kind_) {
    case ModelKind::Gaussian: return fmt::format("gaussian(n={})", dimension());
    case ModelKind::Cylinder: return fmt::format("cylinder(n={}, k={})", dimension(), euclidean_dim_);
    case ModelKind::Sphere: return fmt::format("sphere(n={})", dimension());
  }
  return "unknown";
}

int ShrinkerModel::embedding_dim() const {
  return (sphere_dim_ > 0 ? sphere_dim_ + 1 : 0) + euclidean_dim_;
}

double ShrinkerModel::hamilton_constant() const {
  return 0.5 * sphere_dim_ - normalization_shift_;
}

double ShrinkerModel::cut_radius() const {
  if (sphere_dim_ == 0) return std::numeric_limits<double>::infinity();
  return std::numbers::pi * sphere_radius_;
}

void ShrinkerModel::set_base(const ManifoldPoint& p) {
  validate(p);
  base_ = p;
  const int m = sphere_dim_;
  if (m == 0) {
    sphere_frame_.resize(0, 0);
    return;
  }
  // Householder reflection taking e_m to the base direction q; its first m
  // columns are then an orthonormal frame of T_q S^m.
  Eigen::VectorXd north = Eigen::VectorXd::Zero(m + 1);
  north[m] = 1.0;
  const Eigen::VectorXd u = north - p.direction;
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(m + 1, m + 1);
  if (u.squaredNorm() > 1e-30) h -= 2.0 * u * u.transpose() / u.squaredNorm();
  sphere_frame_ = h;
  sphere_frame_.col(m) = p.direction;
}

void ShrinkerModel::validate(const ManifoldPoint& x) const {
  const int m = sphere_dim_;
  const auto expected_dir = static_cast<Eigen::Index>(m > 0 ? m + 1 : 0);
  if (x.direction.size() != expected_dir || x.euclidean.size() != euclidean_dim_) {
    throw Error(ErrorCode::Domain,
                fmt::format("point has {}+{} coordinates, {} expects {}+{}", x.direction.size(),
                            x.euclidean.size(), name(), expected_dir, euclidean_dim_));
  }
  if (!x.direction.allFinite() || !x.euclidean.allFinite()) {
    throw Error(ErrorCode::Domain, "point has non-finite coordinates");
  }
  if (m > 0 && std::abs(x.direction.norm() - 1.0) > kUnitNormTolerance) {
    throw Error(ErrorCode::Domain,
                fmt::format("sphere direction has norm {:.17g}, expected 1", x.direction.norm()));
  }
}

ManifoldPoint ShrinkerModel::minimum_point() const {
  ManifoldPoint p = base_;
  p.euclidean.setZero();
  return p;
}

double ShrinkerModel::raw_potential(const ManifoldPoint& x) const {
  validate(x);
  return 0.25 * x.euclidean.squaredNorm();
}

double ShrinkerModel::potential(const ManifoldPoint& x) const {
  return raw_potential(x) + normalization_shift_;
}

Eigen::VectorXd ShrinkerModel::potential_gradient(const ManifoldPoint& x) const {
  validate(x);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(dimension());
  grad.tail(euclidean_dim_) = 0.5 * x.euclidean;
  return grad;
}

double ShrinkerModel::scalar_curvature(const ManifoldPoint& x) const {
  validate(x);
  const int m = sphere_dim_;
  if (m == 0) return 0.0;
  return m * (m - 1) / (sphere_radius_ * sphere_radius_);
}

double ShrinkerModel::sphere_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

double ShrinkerModel::geodesic_distance(const ManifoldPoint& x, const ManifoldPoint& y) const {
  validate(x);
  validate(y);
  const double euclid2 = (x.euclidean - y.euclidean).squaredNorm();
  if (sphere_dim_ == 0) return std::sqrt(euclid2);
  const double arc = sphere_radius_ * sphere_angle(x.direction, y.direction);
  return std::sqrt(arc * arc + euclid2);
}

Eigen::Ref<const Eigen::VectorXd> ShrinkerModel::sphere_part(const TangentVector& v) const {
  return v.coords.head(sphere_dim_);
}

Eigen::Ref<const Eigen::VectorXd> ShrinkerModel::euclidean_part(const TangentVector& v) const {
  return v.coords.tail(euclidean_dim_);
}

bool ShrinkerModel::in_omega(const TangentVector& v) const {
  if (v.coords.size() != dimension()) {
    throw Error(ErrorCode::Domain, fmt::format("tangent vector has {} coordinates, {} expects {}",
                                               v.coords.size(), name(), dimension()));
  }
  if (sphere_dim_ == 0) return true;
  return sphere_part(v).norm() < cut_radius();
}

ManifoldPoint ShrinkerModel::exp_map(const TangentVector& v) const {
  if (!in_omega(v)) {
    throw Error(ErrorCode::CutLocus,
                fmt::format("sphere component {:.17g} reaches the cut radius {:.17g}",
                            sphere_part(v).norm(), cut_radius()));
  }
  ManifoldPoint x;
  x.euclidean = base_.euclidean + euclidean_part(v);
  const int m = sphere_dim_;
  if (m > 0) {
    const auto u = sphere_part(v);
    const double t = u.norm();
    const double angle = t / sphere_radius_;
    x.direction = std::cos(angle) * base_.direction;
    if (t > 0.0) x.direction += (std::sin(angle) / t) * (sphere_frame_.leftCols(m) * u);
  }
  return x;
}

TangentVector ShrinkerModel::log_map(const ManifoldPoint& x) const {
  validate(x);
  TangentVector v;
  v.coords = Eigen::VectorXd::Zero(dimension());
  v.coords.tail(euclidean_dim_) = x.euclidean - base_.euclidean;
  const int m = sphere_dim_;
  if (m > 0) {
    const Eigen::VectorXd tangential = sphere_frame_.leftCols(m).transpose() * x.direction;
    const double s = tangential.norm();
    const double c = base_.direction.dot(x.direction);
    const double angle = std::atan2(s, c);
    if (std::numbers::pi - angle < kCutTolerance) {
      throw Error(ErrorCode::CutLocus, "point lies on the cut locus of the base point");
    }
    if (s > 0.0) v.coords.head(m) = (sphere_radius_ * angle / s) * tangential;
  }
  return v;
}

double ShrinkerModel::jacobian_density(const TangentVector& v) const {
  if (!in_omega(v)) throw Error(ErrorCode::CutLocus, "jacobian requested outside Omega");
  const int m = sphere_dim_;
  if (m < 2) return 1.0;
  const double t = sphere_part(v).norm();
  if (t == 0.0) return 1.0;
  const double ratio = sphere_radius_ * std::sin(t / sphere_radius_) / t;
  return std::pow(ratio, m - 1);
}

double ShrinkerModel::pulled_back_potential(const TangentVector& v) const {
  if (!in_omega(v)) throw Error(ErrorCode::CutLocus, "potential requested outside Omega");
  return 0.25 * (base_.euclidean + euclidean_part(v)).squaredNorm() + normalization_shift_;
}

Eigen::VectorXd ShrinkerModel::embed(const ManifoldPoint& x) const {
  validate(x);
  Eigen::VectorXd coords(embedding_dim());
  coords << x.direction, x.euclidean;
  return coords;
}

ManifoldPoint ShrinkerModel::unembed(const Eigen::Ref<const Eigen::VectorXd>& coords) const {
  if (coords.size() != embedding_dim()) {
    throw Error(ErrorCode::Domain, fmt::format("expected {} embedding coordinates, got {}",
                                               embedding_dim(), coords.size()));
  }
  const auto dir = static_cast<Eigen::Index>(coords.size() - euclidean_dim_);
  ManifoldPoint x{coords.head(dir), coords.tail(euclidean_dim_)};
  validate(x);
  return x;
}

std::vector<Eigen::VectorXd> spread_directions(int dim, int count) {
  if (dim < 1 || count < 1) throw Error(ErrorCode::Precondition, "need dim >= 1 and count >= 1");
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  if (dim == 1) {
    for (int i = 0; i < count; ++i) out.push_back(Eigen::VectorXd::Constant(1, i % 2 == 0 ? 1.0 : -1.0));
    return out;
  }
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      const double phi = 2.0 * std::numbers::pi * i / count;
      Eigen::VectorXd d(2);
      d << std::cos(phi), std::sin(phi);
      out.push_back(d);
    }
    return out;
  }
  if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      Eigen::VectorXd d(3);
      d << rho * std::cos(golden * i), rho * std::sin(golden * i), z;
      out.push_back(d);
    }
    return out;
  }
  std::mt19937_64 rng(0x5eedULL + static_cast<unsigned>(dim));
  std::normal_distribution<double> normal;
  while (static_cast<int>(out.size()) < count) {
    Eigen::VectorXd d(dim);
    for (int j = 0; j < dim; ++j) d[j] = normal(rng);
    if (d.norm() > 1e-8) out.push_back(d.normalized());
  }
  return out;
}

BoundReport area_element_bound_check(const ShrinkerModel& model, const AreaElementGrid& grid) {
  if (grid.radial < 1 || grid.directions < 1 || !(grid.max_radius > 0.0)) {
    throw Error(ErrorCode::Precondition, "area-element grid needs positive sizes");
  }
  const int n = model.dimension();
  const int m = model.sphere_dim();
  const double fp = model.potential(model.base_point());
  const double mu = model.hamilton_entropy();
  const double bound = std::exp(fp - mu);

  double max_jacobian = 0.0;
  double min_jacobian = std::numeric_limits<double>::infinity();
  long samples = 0;
  for (const Eigen::VectorXd& theta : spread_directions(n, grid.directions)) {
    double limit = grid.max_radius;
    if (m > 0) {
      const double c = theta.head(m).norm();
      if (c > 0.0) limit = std::min(limit, model.cut_radius() / c * (1.0 - 1e-9));
    }
    for (int j = 0; j < grid.radial; ++j) {
      const double frac = grid.min_fraction + (1.0 - grid.min_fraction) * (j + 1.0) / grid.radial;
      const TangentVector v{frac * limit * theta};
      const double jac = model.jacobian_density(v);
      max_jacobian = std::max(max_jacobian, jac);
      min_jacobian = std::min(min_jacobian, jac);
      ++samples;
    }
  }

  BoundReport report;
  report.theorem_id = "area-element";
  report.lhs = max_jacobian;
  report.rhs = bound;
  report.tolerance = 1e-12;
  report.constants.set("f_p", fp);
  report.constants.set("mu", mu);
  report.constants.set("exp_f_p_minus_mu", bound);
  report.constants.set("max_ratio", max_jacobian / bound);
  report.constants.set("min_jacobian", min_jacobian);
  report.scheme = "polar-grid";
  report.discretization.set("samples", static_cast<double>(samples));
  report.discretization.set("radial", grid.radial);
  report.discretization.set("directions", grid.directions);
  report.discretization.set("max_radius", grid.max_radius);
  report.finalize();
  return report;
}

}  // namespace shrinker_ot
