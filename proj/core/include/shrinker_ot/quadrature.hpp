#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "shrinker_ot/measure.hpp"
#include "shrinker_ot/models.hpp"
#include "shrinker_ot/report.hpp"

namespace shrinker_ot {

enum class SchemeKind { Polar, Lattice, MonteCarlo };

std::string to_string(SchemeKind kind);
SchemeKind parse_scheme_kind(const std::string& name);

/// How a density on T_pM becomes atoms.
///
/// Polar: the leading `polar_dims` coordinates in polar form (Gauss-Legendre
///   radii on [0, R(theta)] times a product Gauss rule on the unit sphere), the
///   remaining ones on a Gauss-Hermite grid; `resolution` bounds the atom count.
///   polar_dims = -1 takes the model's sphere dimension, so the Euclidean factor
///   of a cylinder is on the Hermite grid and a Gaussian is a pure Hermite grid.
/// Lattice: cell-centred grid on [-radius_cap, radius_cap]^n with `resolution`
///   cells per axis, weights density * h^n.
/// MonteCarlo: `resolution` samples of the Gaussian N(0, 2I) with importance weights.
struct Scheme {
  SchemeKind kind = SchemeKind::Polar;
  int resolution = 2048;
  double radius_cap = 14.0;
  /// Width of the excluded shell below the cut radius, as a fraction of pi*rho.
  double cut_shell = 1e-6;
  std::uint64_t seed = 1;
  int polar_dims = -1;
  /// Polar with a Hermite block: split the budget as radial = 2 * hermite with
  /// the smallest sphere rule, instead of favouring the radial count. Used when
  /// a shell cut |v| >= s crosses both blocks.
  bool balanced = false;
  /// Discretize only the shell {|v| >= shell}. Polar radii start where each ray
  /// enters the shell; lattice and Monte Carlo atoms inside it get weight 0.
  double shell = 0.0;
};

/// Scheme with polar_dims = -1 replaced by the sphere dimension of `model`.
Scheme resolve_scheme(const ShrinkerModel& model, const Scheme& scheme);

/// Node counts of the polar scheme.
struct PolarCounts {
  int radial = 0;
  /// Per-factor count A of the sphere rule (see sphere_rule()).
  int angular = 0;
  /// Size of the polar block; -1 means every coordinate.
  int polar_dims = -1;
  /// Gauss-Hermite nodes per remaining axis.
  int hermite = 0;
};

/// Counts for `resolution` atoms in dimension n with a polar block of size
/// polar_dims (-1: all n). The angular count A (even, >= 2) is the largest
/// leaving at least 2 sqrt(resolution) radial nodes, the Hermite count equals A,
/// and radial takes the remaining budget. Without a polar block the Hermite count is floor(resolution^{1/n}),
/// at most 96. `balanced` switches to the allocation described on Scheme.
/// Throws Config below the minimum.
PolarCounts polar_counts(int n, int resolution, int polar_dims = -1, bool balanced = false);

/// Product Gauss rule on S^dim in R^{dim+1}: S^0 = {-1, +1}, S^1 uses `angular`
/// equispaced angles, S^d takes angular/2 Gauss-Jacobi heights times S^{d-1}.
/// Weights sum to the sphere area. Rows of the returned matrix are the nodes.
struct SphereRule {
  Eigen::MatrixXd nodes;
  Eigen::VectorXd weights;
};
SphereRule sphere_rule(int dim, int angular);

/// nu-bar = (4 pi)^{-n/2} chi_Omega J e^{-f(exp_p v)} dv on T_pM.
DiscreteMeasure discretize_pullback(const ShrinkerModel& model, const Scheme& scheme);
/// Same construction with explicit counts.
DiscreteMeasure discretize_pullback(const ShrinkerModel& model, const PolarCounts& counts,
                                    double radius_cap, double cut_shell = 1e-6,
                                    double shell = 0.0);

/// gamma = (4 pi)^{-n/2} e^{-|v|^2/4} dv on R^n. Uses the same nodes and weight
/// expression as discretize_pullback on the Gaussian model; pass a resolved
/// scheme to match the block layout of another model.
DiscreteMeasure discretize_gaussian(int n, const Scheme& scheme);

/// nu = (4 pi)^{-n/2} e^{-f} dv_g on M itself (embedded points): geodesic polar
/// Gauss rule on the sphere factor times Gauss-Hermite on the Euclidean factor.
/// `angular` is the sphere-rule count, `hermite` the nodes per Euclidean axis.
DiscreteMeasure discretize_manifold(const ShrinkerModel& model, int angular, int hermite);

/// Constants of the volume-growth estimate around p, with rho = 1/2.
struct GrowthConstants {
  double rho = 0.5;
  double r0 = 1.0;
  double C = 0.0;        // fitted f >= rho r^2/2 - C r for r >= r0, inflated 5%
  double lambda0 = 0.0;  // inf of f over B_r0(p)
  double lambda1 = 0.0;  // 2 lambda0 - rho r0^2/3 + C r0
  double lambda = 0.0;   // max(0, -lambda1)
  double A = 0.0;        // int_{B_r0} e^{-f} dv
  double B = 0.0;        // omega_{n-1} e^{lambda + f(p)}
};

struct GrowthFitGrid {
  int radial = 400;
  int angular = 24;
  double max_radius = 40.0;
};

GrowthConstants growth_constants(const ShrinkerModel& model, double r0 = 1.0,
                                 const GrowthFitGrid& grid = {});

struct MomentResult {
  double value = 0.0;       // int_{r <= cap} r^k d nu
  double tail_bound = 0.0;  // upper bound on int_{r > cap} r^k d nu
  double radius_cap = 0.0;
};

/// k-th moment of nu about p, computed on T_pM through the exponential map.
MomentResult moments(const ShrinkerModel& model, double k, double radius_cap,
                     const PolarCounts& counts = {160, 48});

/// Checks int_{B_R} phi(r) e^{-f} dv <= A phi(r0) + B int_{r0}^R phi r^{n-1} e^{-rho r^2/2 + C r} dr.
/// phi must be nondecreasing on [0, R] (checked on a grid; Precondition otherwise).
BoundReport growth_bound_check(const ShrinkerModel& model, const std::function<double(double)>& phi,
                               double R, double r0 = 1.0, const PolarCounts& counts = {160, 48});

}  // namespace shrinker_ot
