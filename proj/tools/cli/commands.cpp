#include "commands.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "shrinker_ot/bounds.hpp"
#include "shrinker_ot/error.hpp"
#include "shrinker_ot/transport.hpp"

namespace shrinker_ot::cli {
namespace {

constexpr long kMaxSupport = 4096;

Json document_head(const std::string& command, const RunConfig& config) {
  Json doc = Json::object();
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  doc["config"] = config_json(config);
  return doc;
}

Json model_json(const ShrinkerModel& model) {
  Json out = Json::object();
  out["family"] = to_string(model.kind());
  out["name"] = model.name();
  out["n"] = model.dimension();
  out["sphere_dim"] = model.sphere_dim();
  out["euclidean_dim"] = model.euclidean_dim();
  out["sphere_radius"] = model.sphere_radius();
  const Eigen::VectorXd p = model.embed(model.base_point());
  out["base_point"] = std::vector<double>(p.data(), p.data() + p.size());
  return out;
}

CheckOptions check_options(const RunConfig& config, const ShrinkerModel& model) {
  CheckOptions options;
  options.scheme = make_scheme(config);
  options.drift_limit = config.drift_limit;
  require_support(options.scheme, model.dimension(), kMaxSupport);
  return options;
}

Eigen::VectorXd shift_vector(const RunConfig& config) {
  const int n = config.n;
  Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
  if (config.shift.size() == 1) {
    m[0] = config.shift[0];
  } else if (static_cast<int>(config.shift.size()) == n) {
    for (int i = 0; i < n; ++i) m[i] = config.shift[static_cast<std::size_t>(i)];
  } else {
    throw Error(ErrorCode::Usage,
                fmt::format("shift needs 1 or n = {} entries, got {}", n, config.shift.size()));
  }
  return m;
}

// The Gaussian nu on a lattice and eta = nu translated by m, on the same atoms.
struct TranslatedPair {
  DiscreteMeasure eta;
  DiscreteMeasure nu;
  Eigen::VectorXd m;
};

TranslatedPair translated_gaussians(const RunConfig& config, double default_cap,
                                    int default_cells) {
  if (parse_model_kind(config.model) != ModelKind::Gaussian) {
    throw Error(ErrorCode::Usage, "talagrand and lsi compare translated Gaussians; use --model gaussian");
  }
  Scheme defaults;
  defaults.kind = SchemeKind::Lattice;
  defaults.radius_cap = default_cap;
  defaults.resolution = default_cells;
  const Scheme scheme = make_scheme(config, defaults);
  if (scheme.kind != SchemeKind::Lattice) {
    throw Error(ErrorCode::Usage, "talagrand and lsi need the lattice scheme (a common grid)");
  }
  if (scheme_atoms(scheme, config.n) > kMaxSupport) {
    throw Error(ErrorCode::Usage, fmt::format("lattice of {} atoms exceeds the cap {}",
                                              scheme_atoms(scheme, config.n), kMaxSupport));
  }
  const Eigen::VectorXd m = shift_vector(config);
  DiscreteMeasure nu = discretize_gaussian(config.n, scheme).normalized();
  const double m2 = m.squaredNorm();
  DiscreteMeasure eta =
      nu.reweighted([&](const PointRef& x) { return std::exp(0.25 * (2.0 * x.dot(m) - m2)); })
          .normalized();
  return {std::move(eta), std::move(nu), m};
}

std::vector<BoundReport> run_check(const RunConfig& config, const std::string& id) {
  const ShrinkerModel model = make_model(config);
  std::vector<BoundReport> reports;
  if (id == "main") {
    const CheckOptions options = check_options(config, model);
    reports.push_back(check_main_bound(model, fit_potential_bound(model, 0.0, options.fit), options));
  } else if (id == "restricted") {
    const CheckOptions options = check_options(config, model);
    for (double s : config.s_values) {
      reports.push_back(check_restricted_bound(model, fit_potential_bound(model, s, options.fit),
                                               options));
    }
  } else if (id == "minimum") {
    reports.push_back(check_minimum_point_bound(model, check_options(config, model)));
  } else if (id == "talagrand") {
    const TranslatedPair pair = translated_gaussians(config, 6.0, 24);
    InequalityOptions options;
    options.relative_tolerance = config.relative_tolerance;
    BoundReport r = check_talagrand(pair.eta, pair.nu, 0.5, options);
    r.constants.set("shift_norm", pair.m.norm());
    reports.push_back(std::move(r));
  } else if (id == "lsi") {
    const TranslatedPair pair = translated_gaussians(config, 14.0, 56);
    InequalityOptions options;
    options.relative_tolerance = config.relative_tolerance;
    const Eigen::VectorXd half_m = 0.5 * pair.m;
    BoundReport r = check_lsi(pair.eta, pair.nu, 0.5,
                              [half_m](const PointRef&) -> Eigen::VectorXd { return half_m; },
                              options);
    r.constants.set("shift_norm", pair.m.norm());
    reports.push_back(std::move(r));
  } else if (id == "growth") {
    const std::vector<double> radii = config.values.empty() ? std::vector<double>{5.0, 10.0}
                                                            : config.values;
    for (int power : {0, 1, 2}) {
      for (double R : radii) {
        BoundReport r =
            growth_bound_check(model, [power](double t) { return std::pow(t, power); }, R);
        r.constants.set("phi_power", power);
        reports.push_back(std::move(r));
      }
    }
  } else if (id == "moments") {
    const double cap = config.radius_cap.value_or(12.0);
    const std::vector<double> orders = config.values.empty() ? std::vector<double>{1, 2, 4, 6}
                                                             : config.values;
    for (double k : orders) {
      const MomentResult near = moments(model, k, cap);
      const MomentResult far = moments(model, k, 2.0 * cap);
      BoundReport r;
      r.theorem_id = "moments";
      r.lhs = std::abs(far.value - near.value) / std::abs(far.value);
      r.rhs = 1e-3;
      r.constants.set("k", k);
      r.constants.set("moment", near.value);
      r.constants.set("moment_double_cap", far.value);
      r.constants.set("tail_bound", near.tail_bound);
      r.constants.set("tail_bound_double_cap", far.tail_bound);
      r.scheme = "polar";
      r.discretization.set("radius_cap", cap);
      r.discretization.set("radius_cap_doubled", 2.0 * cap);
      const bool finite = std::isfinite(near.value) && std::isfinite(far.value) &&
                          std::isfinite(near.tail_bound);
      r.finalize(finite, "moment or tail bound is not finite");
      reports.push_back(std::move(r));
    }
  } else if (id == "area-element") {
    AreaElementGrid grid;
    if (config.radius_cap) grid.max_radius = *config.radius_cap;
    reports.push_back(area_element_bound_check(model, grid));
  } else if (id == "second-moment") {
    SecondMomentOptions options;
    if (config.radius_cap) options.radius_cap = *config.radius_cap;
    reports.push_back(second_moment_check(model, options));
  } else {
    throw Error(ErrorCode::Usage, fmt::format("unknown check '{}'", id));
  }
  return reports;
}

bool all_passed(const std::vector<BoundReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const BoundReport& r) { return r.passed; });
}

// Smallest a in [0, a_max] with required_b(a) <= b; required_b decreases in a.
double a_for_b(const ShrinkerModel& model, double b, const FitGrid& grid) {
  if (required_b(model, 0.0, 0.0, grid) <= b) return 0.0;
  double hi = grid.a_max;
  if (required_b(model, 0.0, hi, grid) > b) {
    throw Error(ErrorCode::Fit, fmt::format("b = {} is below the requirement at a = {}", b, hi));
  }
  double lo = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (required_b(model, 0.0, mid, grid) <= b ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = {"main",      "restricted", "minimum",
                                               "talagrand", "lsi",        "growth",
                                               "moments",   "area-element", "second-moment"};
  return ids;
}

const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> params = {"resolution", "s", "a", "b", "n"};
  return params;
}

Json config_json(const RunConfig& config) {
  Json out = Json::object();
  out["model"] = config.model;
  out["n"] = config.n;
  out["k"] = config.k;
  out["base_point"] = config.base_point;
  out["scheme"] = config.scheme ? Json(*config.scheme) : Json(nullptr);
  out["resolution"] = config.resolution ? Json(*config.resolution) : Json(nullptr);
  out["radius_cap"] = config.radius_cap ? Json(*config.radius_cap) : Json(nullptr);
  out["seed"] = config.seed ? Json(*config.seed) : Json(nullptr);
  out["s"] = config.s_values;
  out["values"] = config.values;
  out["shift"] = config.shift;
  out["drift_limit"] = config.drift_limit;
  out["relative_tolerance"] = config.relative_tolerance;
  return out;
}

CommandResult cmd_model_info(const RunConfig& config) {
  const ShrinkerModel model = make_model(config);
  const EntropyResult mu = entropy(model);
  const ManifoldPoint& p = model.base_point();
  const double residual = hamilton_residual(model);

  NamedValues values;
  values.set("mu_closed_form", mu.closed_form);
  values.set("mu_quadrature", mu.numeric);
  values.set("entropy_discrepancy", mu.discrepancy);
  values.set("hamilton_constant", model.hamilton_constant());
  values.set("log_weighted_volume_raw", mu.log_volume);
  values.set("weighted_volume", std::exp(mu.log_volume - model.normalization_shift()));
  values.set("f_p", model.potential(p));
  values.set("R_p", model.scalar_curvature(p));
  values.set("grad_f_p_norm", model.potential_gradient(p).norm());
  values.set("hamilton_residual", residual);

  CommandResult result;
  result.passed = residual < 1e-10;
  result.document = document_head("model-info", config);
  result.document["model"] = model_json(model);
  result.document["constants"] = to_json(values);
  result.document["passed"] = result.passed;
  result.table.header = {"name", "value"};
  for (const auto& [name, value] : values.entries()) {
    result.table.rows.push_back({name, format_double(value)});
  }
  return result;
}

CommandResult cmd_check(const RunConfig& config, const std::string& theorem_id) {
  const std::vector<BoundReport> reports = run_check(config, theorem_id);
  CommandResult result;
  result.passed = all_passed(reports);
  result.document = document_head("check", config);
  result.document["theorem_id"] = theorem_id;
  result.document["model"] = model_json(make_model(config));
  result.document["passed"] = result.passed;
  result.document["reports"] = Json::array();
  for (const BoundReport& r : reports) result.document["reports"].push_back(to_json(r));
  result.table = reports_table(reports);
  return result;
}

CommandResult cmd_sweep(const RunConfig& config, const std::string& parameter) {
  if (std::find(sweep_parameters().begin(), sweep_parameters().end(), parameter) ==
      sweep_parameters().end()) {
    throw Error(ErrorCode::Usage, fmt::format("cannot sweep '{}' (expected resolution, s, a, b or n)",
                                              parameter));
  }
  if (config.values.empty()) throw Error(ErrorCode::Usage, "sweep needs --values");

  std::vector<BoundReport> reports;
  std::vector<std::vector<std::string>> leading;
  for (double value : config.values) {
    RunConfig row = config;
    BoundReport report;
    if (parameter == "resolution" || parameter == "n") {
      const auto integer = static_cast<int>(std::lround(value));
      if (std::abs(value - integer) > 0.0 || integer < 1) {
        throw Error(ErrorCode::Usage, fmt::format("{} must be a positive integer, got {}",
                                                  parameter, value));
      }
      (parameter == "n" ? row.n : row.resolution.emplace()) = integer;
      report = run_check(row, "main").front();
    } else if (parameter == "s") {
      row.s_values = {value};
      report = run_check(row, "restricted").front();
    } else {
      const ShrinkerModel model = make_model(row);
      const CheckOptions options = check_options(row, model);
      PotentialBound bound;
      if (parameter == "a") {
        if (value < 0.0) throw Error(ErrorCode::Usage, "a must be nonnegative");
        bound.a = value;
        bound.b = required_b(model, 0.0, value, options.fit) * (1.0 + options.fit.inflation);
      } else {
        if (value < 0.0) throw Error(ErrorCode::Usage, "b must be nonnegative");
        bound.b = value;
        bound.a = a_for_b(model, value, options.fit);
      }
      report = check_main_bound(model, bound, options);
    }
    reports.push_back(std::move(report));
    leading.push_back({format_double(value)});
  }

  CommandResult result;
  result.passed = all_passed(reports);
  result.document = document_head("sweep", config);
  result.document["parameter"] = parameter;
  result.document["passed"] = result.passed;
  result.document["rows"] = Json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    Json row = Json::object();
    row["value"] = config.values[i];
    row["report"] = to_json(reports[i]);
    result.document["rows"].push_back(std::move(row));
  }
  result.table = reports_table(reports, {parameter}, leading);
  return result;
}

CommandResult cmd_moments(const RunConfig& config) {
  const ShrinkerModel model = make_model(config);
  const double cap = config.radius_cap.value_or(12.0);
  const std::vector<double> orders = config.values.empty() ? std::vector<double>{1, 2, 4, 6}
                                                           : config.values;
  CommandResult result;
  result.document = document_head("moments", config);
  result.document["model"] = model_json(model);
  result.document["radius_cap"] = cap;
  result.document["moments"] = Json::array();
  result.table.header = {"k", "moment", "tail_bound", "radius_cap"};
  for (double k : orders) {
    if (!(k > 0.0)) throw Error(ErrorCode::Usage, fmt::format("moment order {} is not positive", k));
    const MomentResult m = moments(model, k, cap);
    Json row = Json::object();
    row["k"] = k;
    row["moment"] = m.value;
    row["tail_bound"] = m.tail_bound;
    result.document["moments"].push_back(std::move(row));
    result.passed = result.passed && std::isfinite(m.value) && std::isfinite(m.tail_bound);
    result.table.rows.push_back(
        {format_double(k), format_double(m.value), format_double(m.tail_bound), format_double(cap)});
  }
  result.document["passed"] = result.passed;
  return result;
}

CommandResult cmd_fit_potential(const RunConfig& config) {
  const ShrinkerModel model = make_model(config);
  const FitGrid grid;
  const double gap = model.potential(model.base_point()) - entropy_closed_form(model);
  CommandResult result;
  result.document = document_head("fit-potential", config);
  result.document["model"] = model_json(model);
  result.document["fits"] = Json::array();
  result.table.header = {"s", "a", "b", "alpha", "rhs", "slack", "b_at_a_zero"};
  for (double s : config.s_values) {
    const PotentialBound bound = fit_potential_bound(model, s, grid);
    const double alpha = alpha_constant(model.dimension(), s, bound.a, bound.b);
    const double slack = potential_bound_slack(model, bound, grid);
    const double b_zero = required_b(model, s, 0.0, grid);
    Json row = Json::object();
    row["s"] = s;
    row["a"] = bound.a;
    row["b"] = bound.b;
    row["alpha"] = alpha;
    row["rhs"] = alpha * std::exp(gap) + gap;
    row["slack"] = slack;
    row["b_at_a_zero"] = b_zero;
    result.document["fits"].push_back(std::move(row));
    result.passed = result.passed && slack >= 0.0;
    result.table.rows.push_back({format_double(s), format_double(bound.a), format_double(bound.b),
                                 format_double(alpha), format_double(alpha * std::exp(gap) + gap),
                                 format_double(slack), format_double(b_zero)});
  }
  result.document["passed"] = result.passed;
  return result;
}

}  // namespace shrinker_ot::cli
