#include "run_config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "shrinker_ot/error.hpp"

namespace shrinker_ot::cli {
namespace {

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw Error(ErrorCode::Usage, fmt::format("{}: '{}' is not {}", key, value, want));
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string_view t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(value)) {
    bad_value(key, text, "a finite number");
  }
  return value;
}

template <typename Int>
Int parse_integer(std::string_view key, std::string_view text) {
  const std::string_view t = trim(text);
  Int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) bad_value(key, text, "an integer");
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string_view t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  bad_value(key, text, "a boolean");
}

std::vector<double> parse_list_for(std::string_view key, std::string_view text) {
  std::vector<double> out;
  std::string_view rest = trim(text);
  if (rest.empty()) return out;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_double(key, rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys = {
      "model", "n",      "k",     "base_point",  "scheme",      "resolution",
      "radius_cap", "seed", "s",  "values",      "shift",       "drift_limit",
      "relative_tolerance", "out", "csv"};
  return keys;
}

std::vector<double> parse_list(std::string_view text) { return parse_list_for("list", text); }

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
  const std::string_view v = trim(value);
  if (key == "model") {
    config.model = std::string(v);
    parse_model_kind(config.model);
  } else if (key == "n") {
    config.n = parse_integer<int>(key, v);
  } else if (key == "k") {
    config.k = parse_integer<int>(key, v);
  } else if (key == "base_point") {
    config.base_point = parse_list_for(key, v);
  } else if (key == "scheme") {
    parse_scheme_kind(std::string(v));
    config.scheme = std::string(v);
  } else if (key == "resolution") {
    config.resolution = parse_integer<int>(key, v);
    if (*config.resolution < 1) bad_value(key, v, "a positive integer");
  } else if (key == "radius_cap") {
    config.radius_cap = parse_double(key, v);
    if (!(*config.radius_cap > 0.0)) bad_value(key, v, "positive");
  } else if (key == "seed") {
    config.seed = parse_integer<std::uint64_t>(key, v);
  } else if (key == "s") {
    config.s_values = parse_list_for(key, v);
    if (std::any_of(config.s_values.begin(), config.s_values.end(),
                    [](double s) { return s < 0.0; })) {
      bad_value(key, v, "a list of nonnegative numbers");
    }
  } else if (key == "values") {
    config.values = parse_list_for(key, v);
  } else if (key == "shift") {
    config.shift = parse_list_for(key, v);
  } else if (key == "drift_limit") {
    config.drift_limit = parse_double(key, v);
  } else if (key == "relative_tolerance") {
    config.relative_tolerance = parse_double(key, v);
  } else if (key == "out") {
    config.out = std::string(v);
  } else if (key == "csv") {
    config.csv = parse_bool(key, v);
  } else {
    throw Error(ErrorCode::Usage, fmt::format("unknown setting '{}'", key));
  }
}

void apply_config_stream(RunConfig& config, std::istream& in, const std::string& source) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::Usage, fmt::format("{}:{}: expected key = value", source, number));
    }
    const std::string_view key = trim(text.substr(0, eq));
    try {
      apply_setting(config, key, text.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorCode::Usage, fmt::format("{}:{}: {}", source, number, e.what()));
    }
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Usage, fmt::format("cannot open config file '{}'", path));
  apply_config_stream(config, in, path);
}

ShrinkerModel make_model(const RunConfig& config) {
  if (config.n < 2) {
    throw Error(ErrorCode::Usage, fmt::format("n = {} but the models need n >= 2", config.n));
  }
  const ModelKind kind = parse_model_kind(config.model);
  ShrinkerModel model = [&] {
    switch (kind) {
      case ModelKind::Gaussian: return ShrinkerModel::gaussian(config.n);
      case ModelKind::Sphere: return ShrinkerModel::sphere(config.n);
      case ModelKind::Cylinder:
        if (config.k < 1 || config.n - config.k < 2) {
          throw Error(ErrorCode::Usage,
                      fmt::format("cylinder needs k >= 1 and n - k >= 2 (n={}, k={})", config.n,
                                  config.k));
        }
        return ShrinkerModel::cylinder(config.n, config.k);
    }
    throw Error(ErrorCode::Usage, "unknown model");
  }();
  if (!config.base_point.empty()) {
    if (static_cast<int>(config.base_point.size()) != config.n) {
      throw Error(ErrorCode::Usage, fmt::format("base_point has {} entries, expected n = {}",
                                                config.base_point.size(), config.n));
    }
    const TangentVector v{Eigen::Map<const Eigen::VectorXd>(
        config.base_point.data(), static_cast<Eigen::Index>(config.base_point.size()))};
    if (!model.in_omega(v)) throw Error(ErrorCode::Usage, "base_point lies beyond the cut locus");
    model = model.with_base_point(model.exp_map(v));
  }
  return model;
}

Scheme make_scheme(const RunConfig& config, const Scheme& defaults) {
  Scheme scheme = defaults;
  if (config.scheme) scheme.kind = parse_scheme_kind(*config.scheme);
  if (config.resolution) scheme.resolution = *config.resolution;
  if (config.radius_cap) scheme.radius_cap = *config.radius_cap;
  if (config.seed) scheme.seed = *config.seed;
  return scheme;
}

long scheme_atoms(const Scheme& scheme, int n) {
  if (scheme.kind == SchemeKind::Lattice) {
    return static_cast<long>(std::llround(std::pow(static_cast<double>(scheme.resolution), n)));
  }
  return scheme.resolution;
}

void require_support(const Scheme& scheme, int n, long max_support) {
  Scheme fine = scheme;
  fine.resolution *= 2;
  const long atoms = scheme_atoms(fine, n);
  if (atoms > max_support) {
    throw Error(ErrorCode::Usage,
                fmt::format("resolution {} gives {} atoms at the fine level, above the cap {}",
                            scheme.resolution, atoms, max_support));
  }
}

}  // namespace shrinker_ot::cli
