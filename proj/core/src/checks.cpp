#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "shrinker_ot/bounds.hpp"
#include "shrinker_ot/error.hpp"
#include "shrinker_ot/numerics.hpp"
#include "shrinker_ot/transport.hpp"

namespace shrinker_ot {
namespace {

struct LevelResult {
  double lhs = 0.0;
  double nu_bar_mass = 1.0;
  double gamma_mass = 1.0;
  Eigen::Index nu_bar_atoms = 0;
  Eigen::Index gamma_atoms = 0;
  double duality_gap = 0.0;
  long pivots = 0;
};

// nu-bar and gamma on Sigma_s, each discretized directly on the shell.
Restriction shell_measure(const DiscreteMeasure& full, const Scheme& scheme,
                          const std::function<DiscreteMeasure(const Scheme&)>& discretize) {
  if (scheme.shell == 0.0) return {full.normalized(), 1.0};
  try {
    const DiscreteMeasure part = discretize(scheme);
    return {part.normalized(), part.total_mass() / full.total_mass()};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Precondition) throw;
    throw Error(ErrorCode::EmptyRestriction,
                fmt::format("no mass on |v| >= {} at resolution {}", scheme.shell, scheme.resolution));
  }
}

LevelResult run_level(const ShrinkerModel& model, const Scheme& scheme) {
  Scheme whole = scheme;
  whole.shell = 0.0;
  // gamma shares the block layout, so on a product model the Hermite atoms coincide.
  const auto nu_bar_on = [&](const Scheme& sc) { return discretize_pullback(model, sc); };
  const auto gamma_on = [&](const Scheme& sc) {
    return discretize_gaussian(model.dimension(), sc);
  };
  const Restriction rn = shell_measure(nu_bar_on(whole), scheme, nu_bar_on);
  const Restriction rg = shell_measure(gamma_on(whole), scheme, gamma_on);
  const TransportResult ot = solve_exact(rn.measure, rg.measure);
  LevelResult out;
  out.lhs = 0.25 * ot.objective;
  out.nu_bar_mass = rn.retained_mass;
  out.gamma_mass = rg.retained_mass;
  out.nu_bar_atoms = rn.measure.size();
  out.gamma_atoms = rg.measure.size();
  out.duality_gap = ot.diagnostics.duality_gap;
  out.pivots = ot.diagnostics.iterations;
  return out;
}

double restricted_rhs(double alpha, double gap, double nu_bar_mass, double gamma_mass) {
  return alpha * std::exp(gap) / nu_bar_mass + std::log(gamma_mass / nu_bar_mass) + gap;
}

double relative_drift(double coarse, double fine) {
  const double scale = std::max(std::abs(coarse), std::abs(fine));
  return scale == 0.0 ? 0.0 : std::abs(fine - coarse) / scale;
}

// Shared by the main and restricted checks so that s = 0 reproduces the main report exactly.
BoundReport shell_bound(const ShrinkerModel& model, const PotentialBound& bound,
                        const CheckOptions& options, const std::string& theorem_id) {
  const int n = model.dimension();
  const double s = bound.s;
  const double fp = model.potential(model.base_point());
  const double mu = entropy_closed_form(model);
  const double gap = fp - mu;
  const double alpha = alpha_constant(n, s, bound.a, bound.b);

  Scheme coarse = resolve_scheme(model, options.scheme);
  coarse.shell = s;
  if (s > 0.0) coarse.balanced = true;
  Scheme fine = coarse;
  fine.resolution = 2 * coarse.resolution;
  const LevelResult lc = run_level(model, coarse);
  const LevelResult lf = run_level(model, fine);

  const double rhs_coarse = restricted_rhs(alpha, gap, lc.nu_bar_mass, lc.gamma_mass);
  const double rhs_fine = restricted_rhs(alpha, gap, lf.nu_bar_mass, lf.gamma_mass);
  const double drift = relative_drift(lc.lhs, lf.lhs);

  BoundReport report;
  report.theorem_id = theorem_id;
  report.lhs = lf.lhs;
  report.rhs = rhs_fine;
  report.tolerance = 1e-12 * std::max(1.0, std::abs(rhs_fine));
  report.constants.set("a", bound.a);
  report.constants.set("b", bound.b);
  report.constants.set("s", s);
  report.constants.set("alpha", alpha);
  report.constants.set("Gamma_s_n_a", bound.a == 0.0 && bound.b == 0.0
                                          ? 0.0
                                          : gamma_integral(s, n, bound.a));
  report.constants.set("Gamma_s_n_minus_1_a", bound.a == 0.0 && bound.b == 0.0
                                                  ? 0.0
                                                  : gamma_integral(s, n - 1, bound.a));
  report.constants.set("mu", mu);
  report.constants.set("f_p", fp);
  report.constants.set("f_p_minus_mu", gap);
  report.constants.set("exp_f_p_minus_mu", std::exp(gap));
  report.constants.set("nu_bar_mass", lf.nu_bar_mass);
  report.constants.set("gamma_mass", lf.gamma_mass);
  report.constants.set("log_mass_ratio", std::log(lf.gamma_mass / lf.nu_bar_mass));

  report.scheme = to_string(options.scheme.kind);
  report.discretization.set("resolution_coarse", coarse.resolution);
  report.discretization.set("resolution_fine", fine.resolution);
  report.discretization.set("radius_cap", options.scheme.radius_cap);
  report.discretization.set("cut_shell", options.scheme.cut_shell);
  if (coarse.kind == SchemeKind::Polar) {
    report.discretization.set("polar_dims", coarse.polar_dims);
    report.discretization.set("balanced", coarse.balanced ? 1.0 : 0.0);
  }
  // gamma mass beyond the radius cap, lost to truncation.
  report.discretization.set("gaussian_tail_beyond_cap",
                            std::pow(4.0 * std::numbers::pi, -0.5 * n) *
                                numerics::sphere_area(n - 1) *
                                gamma_integral(options.scheme.radius_cap, n - 1, 0.0));
  report.discretization.set("atoms_coarse_nu_bar", static_cast<double>(lc.nu_bar_atoms));
  report.discretization.set("atoms_coarse_gamma", static_cast<double>(lc.gamma_atoms));
  report.discretization.set("atoms_fine_nu_bar", static_cast<double>(lf.nu_bar_atoms));
  report.discretization.set("atoms_fine_gamma", static_cast<double>(lf.gamma_atoms));
  report.discretization.set("lhs_coarse", lc.lhs);
  report.discretization.set("lhs_fine", lf.lhs);
  report.discretization.set("lhs_drift", drift);
  report.discretization.set("rhs_coarse", rhs_coarse);
  report.discretization.set("rhs_fine", rhs_fine);
  report.discretization.set("duality_gap_coarse", lc.duality_gap);
  report.discretization.set("duality_gap_fine", lf.duality_gap);

  const bool coarse_ok = lc.lhs <= rhs_coarse + report.tolerance;
  const bool drift_ok = drift < options.drift_limit;
  if (!coarse_ok) report.notes.push_back("bound fails at the coarse resolution");
  if (!drift_ok) {
    report.notes.push_back(fmt::format("LHS drift {:.3g} exceeds {:.3g}", drift, options.drift_limit));
  }
  report.finalize(coarse_ok && drift_ok, "coarse-resolution or drift test failed");
  return report;
}

}  // namespace

BoundReport check_main_bound(const ShrinkerModel& model, const PotentialBound& bound,
                             const CheckOptions& options) {
  if (bound.s != 0.0) throw Error(ErrorCode::Precondition, "main bound needs a fit with s = 0");
  return shell_bound(model, bound, options, "main");
}

BoundReport check_restricted_bound(const ShrinkerModel& model, const PotentialBound& bound,
                                   const CheckOptions& options) {
  return shell_bound(model, bound, options, "restricted");
}

BoundReport check_minimum_point_bound(const ShrinkerModel& model, const CheckOptions& options) {
  const ManifoldPoint& p = model.base_point();
  const double grad = model.potential_gradient(p).norm();
  if (grad > 1e-8) {
    throw Error(ErrorCode::Precondition,
                fmt::format("base point is not a minimum of f (|grad f| = {:.3g})", grad));
  }
  const PotentialBound bound = fit_potential_bound(model, 0.0, options.fit);
  BoundReport report = shell_bound(model, bound, options, "minimum");

  const double r_p = model.scalar_curvature(p);
  const double gap = report.constants.at("f_p_minus_mu");
  const double consistency = std::abs(gap - r_p);
  const double alpha = report.constants.at("alpha");
  report.constants.set("R_p", r_p);
  report.constants.set("consistency_residual", consistency);
  report.rhs = restricted_rhs(alpha, r_p, report.constants.at("nu_bar_mass"),
                              report.constants.at("gamma_mass"));
  report.tolerance = 1e-12 * std::max(1.0, std::abs(report.rhs));
  const bool was_vetoed = !report.notes.empty();
  const bool consistent = consistency < 1e-8;
  if (!consistent) report.notes.push_back("f(p) - mu differs from R(p)");
  report.finalize(consistent && !was_vetoed, "minimum-point consistency or drift test failed");
  return report;
}

BoundReport second_moment_check(const ShrinkerModel& model, const SecondMomentOptions& options) {
  const DiscreteMeasure nu_bar =
      discretize_pullback(model, options.tangent, options.radius_cap).normalized();
  const double tangent = integrate(nu_bar, [](const PointRef& v) { return v.squaredNorm(); });

  const DiscreteMeasure nu =
      discretize_manifold(model, options.manifold_angular, options.hermite).normalized();
  const ManifoldPoint& p = model.base_point();
  const double manifold = integrate(nu, [&](const PointRef& x) {
    const double r = model.geodesic_distance(p, model.unembed(x));
    return r * r;
  });

  BoundReport report;
  report.theorem_id = "second-moment";
  report.lhs = std::abs(tangent - manifold);
  report.rhs = options.tolerance;
  report.tolerance = 0.0;
  report.constants.set("tangent_second_moment", tangent);
  report.constants.set("manifold_second_moment", manifold);
  report.scheme = "polar/manifold-gauss";
  report.discretization.set("tangent_radial", options.tangent.radial);
  report.discretization.set("tangent_angular", options.tangent.angular);
  report.discretization.set("tangent_atoms", static_cast<double>(nu_bar.size()));
  report.discretization.set("manifold_angular", options.manifold_angular);
  report.discretization.set("hermite", options.hermite);
  report.discretization.set("manifold_atoms", static_cast<double>(nu.size()));
  report.discretization.set("radius_cap", options.radius_cap);
  report.finalize();
  return report;
}

}  // namespace shrinker_ot
