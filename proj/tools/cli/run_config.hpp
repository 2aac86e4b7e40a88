#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shrinker_ot/models.hpp"
#include "shrinker_ot/quadrature.hpp"

namespace shrinker_ot::cli {

/// Everything one command needs. Filled from a flat key = value file and then
/// from command-line flags, both through apply_setting(), so flags win.
struct RunConfig {
  std::string model = "gaussian";
  int n = 2;
  int k = 1;
  /// Tangent vector at the minimum point; the base point is its exponential.
  std::vector<double> base_point;

  /// Unset means the command default (polar for the bound checks, lattice for talagrand and lsi).
  std::optional<std::string> scheme;
  std::optional<int> resolution;
  std::optional<double> radius_cap;
  std::optional<std::uint64_t> seed;

  std::vector<double> s_values{0.0};
  /// Sweep values, moment orders or growth radii depending on the command.
  std::vector<double> values;
  /// Translation of the Gaussian in the talagrand and lsi checks.
  std::vector<double> shift{1.0};

  double drift_limit = 0.05;
  double relative_tolerance = 1e-3;

  std::string out;
  bool csv = false;
};

/// Keys accepted by apply_setting(), in documentation order.
const std::vector<std::string>& setting_keys();

/// Parses `value` for `key` into config; throws Usage on an unknown key or a bad value.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Reads `key = value` lines; '#' starts a comment, blank lines are skipped.
void apply_config_stream(RunConfig& config, std::istream& in, const std::string& source);
void apply_config_file(RunConfig& config, const std::string& path);

/// Model with the configured base point; Usage on invalid dimensions.
ShrinkerModel make_model(const RunConfig& config);

/// Scheme from the config, falling back to `defaults` for unset fields.
Scheme make_scheme(const RunConfig& config, const Scheme& defaults = {});

/// Atom count of one discretization, for the support-size cap.
long scheme_atoms(const Scheme& scheme, int n);

/// Throws Usage if the fine level (2x resolution) would exceed `max_support` atoms.
void require_support(const Scheme& scheme, int n, long max_support = 4096);

std::vector<double> parse_list(std::string_view text);

}  // namespace shrinker_ot::cli
