#pragma once

#include "shrinker_ot/models.hpp"
#include "shrinker_ot/quadrature.hpp"
#include "shrinker_ot/report.hpp"

namespace shrinker_ot {

/// Gamma(s, k, a) = int_s^inf r^k e^{-r^2/4 + a r} dr (the integration starts at max(s, 0)).
double gamma_integral(double s, int k, double a);

/// alpha(k, s, a, b) = (4 pi)^{-k/2} omega_{k-1} e^b (a Gamma(s,k,a) + b Gamma(s,k-1,a)).
double alpha_constant(int k, double s, double a, double b);

struct EntropyResult {
  double closed_form = 0.0;
  double numeric = 0.0;       // log V_f - C from quadrature and Hamilton residuals
  double discrepancy = 0.0;
  double log_volume = 0.0;    // log V_f of the raw potential, by quadrature
  double hamilton_c = 0.0;    // mean of R + |grad f|^2 - f over sample points, raw potential
};

/// Closed-form entropy per model family.
double entropy_closed_form(const ShrinkerModel& model);

/// Entropy two ways; throws Consistency when they differ by more than 1e-6.
EntropyResult entropy(const ShrinkerModel& model);

/// Largest |R + |grad f|^2 - f + mu| over `samples` seeded points near p.
double hamilton_residual(const ShrinkerModel& model, int samples = 1000, std::uint64_t seed = 7);

/// f(x) >= r(x)^2/4 - a r(x) - b whenever r(x) >= s.
struct PotentialBound {
  double a = 0.0;
  double b = 0.0;
  double s = 0.0;
};

struct FitGrid {
  int radial = 400;
  int angular = 24;
  double radius_cap = 40.0;
  double a_max = 5.0;
  int a_steps = 101;
  double inflation = 0.02;
};

/// Smallest b(a) = max(0, sup (r^2/4 - a r - f)) over the grid.
double required_b(const ShrinkerModel& model, double s, double a, const FitGrid& grid = {});

/// min over the grid with r >= s of f - r^2/4 + a r + b (>= 0 for a valid bound).
double potential_bound_slack(const ShrinkerModel& model, const PotentialBound& bound,
                             const FitGrid& grid = {});

/// Feasible (a, b) minimizing alpha(n, s, a, b) e^{f(p) - mu}; both inflated by grid.inflation.
PotentialBound fit_potential_bound(const ShrinkerModel& model, double s, const FitGrid& grid = {});

struct CheckOptions {
  /// Coarse resolution N; the fine run uses 2N.
  Scheme scheme;
  double drift_limit = 0.05;
  FitGrid fit;
};

/// 1/4 W^2(nu-bar, gamma) <= alpha e^{f(p)-mu} + f(p) - mu at p = model.base_point().
BoundReport check_main_bound(const ShrinkerModel& model, const PotentialBound& bound,
                             const CheckOptions& options = {});

/// Restricted version on Sigma_s = {|v| >= s}.
BoundReport check_restricted_bound(const ShrinkerModel& model, const PotentialBound& bound,
                                   const CheckOptions& options = {});

/// Main bound at the minimum point, with the right side written through R(p).
BoundReport check_minimum_point_bound(const ShrinkerModel& model, const CheckOptions& options = {});

struct SecondMomentOptions {
  PolarCounts tangent{256, 96};
  int manifold_angular = 96;
  int hermite = 48;
  double radius_cap = 14.0;
  double tolerance = 1e-6;
};

/// |int |v|^2 d nu-bar - int r^2 d nu| against the tolerance.
BoundReport second_moment_check(const ShrinkerModel& model, const SecondMomentOptions& options = {});

}  // namespace shrinker_ot
