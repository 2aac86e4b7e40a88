#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "shrinker_ot/error.hpp"

using namespace shrinker_ot;
using namespace shrinker_ot::cli;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitError = 3;

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

const Flag kFlags[] = {
    {"--model", "model", "gaussian, cylinder or sphere"},
    {"--n", "n", "dimension"},
    {"--k", "k", "Euclidean factor dimension (cylinder)"},
    {"--base-point", "base_point", "tangent vector at the minimum point, comma separated"},
    {"--scheme", "scheme", "polar, lattice or monte-carlo"},
    {"--resolution", "resolution", "atom budget (polar, monte-carlo) or cells per axis (lattice)"},
    {"--radius-cap", "radius_cap", "radial truncation"},
    {"--seed", "seed", "random seed (monte-carlo)"},
    {"--s", "s", "shell radii, comma separated"},
    {"--values", "values", "sweep values, moment orders or growth radii"},
    {"--shift", "shift", "translation for talagrand and lsi (length 1 or n)"},
    {"--drift-limit", "drift_limit", "largest relative LHS change between N and 2N"},
    {"--relative-tolerance", "relative_tolerance", "slack for talagrand and lsi"},
    {"--out", "out", "write the JSON report here instead of stdout"},
};

struct Options {
  std::map<std::string, std::string> values;
  std::string config_path;
  bool csv = false;
};

void add_common(CLI::App& app, Options& options) {
  for (const Flag& flag : kFlags) {
    app.add_option(flag.name, options.values[flag.key], flag.help);
  }
  app.add_option("--config", options.config_path, "flat key = value file; flags override it");
  app.add_flag("--csv", options.csv, "also write the flat table (next to --out, else stdout)");
}

RunConfig build_config(const CLI::App& app, const Options& options) {
  RunConfig config;
  if (!options.config_path.empty()) apply_config_file(config, options.config_path);
  for (const Flag& flag : kFlags) {
    if (app.count(flag.name) > 0) apply_setting(config, flag.key, options.values.at(flag.key));
  }
  if (options.csv) config.csv = true;
  return config;
}

void emit(const RunConfig& config, const CommandResult& result) {
  if (config.out.empty()) {
    if (config.csv) {
      result.table.write_csv(std::cout);
    } else {
      write_json(std::cout, result.document);
    }
    return;
  }
  std::ofstream json(config.out);
  if (!json) throw Error(ErrorCode::Usage, fmt::format("cannot write '{}'", config.out));
  write_json(json, result.document);
  if (config.csv) {
    const std::string path = std::filesystem::path(config.out).replace_extension(".csv").string();
    std::ofstream csv(path);
    if (!csv) throw Error(ErrorCode::Usage, fmt::format("cannot write '{}'", path));
    result.table.write_csv(csv);
  }
}

bool is_usage(ErrorCode code) {
  return code == ErrorCode::Usage || code == ErrorCode::Config || code == ErrorCode::Precondition;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal transport bounds on closed-form Ricci shrinkers", "shrinker-ot"};
  app.require_subcommand(1);

  Options info_opts, check_opts, sweep_opts, moments_opts, fit_opts;
  std::string theorem_id;
  std::string parameter;

  CLI::App* info = app.add_subcommand("model-info", "derived constants and invariant residuals");
  add_common(*info, info_opts);

  CLI::App* check = app.add_subcommand("check", "run one check and write its report");
  check->add_option("theorem", theorem_id, "check id")
      ->required()
      ->check(CLI::IsMember(check_ids()));
  add_common(*check, check_opts);

  CLI::App* sweep = app.add_subcommand("sweep", "one main/restricted report per value");
  sweep->add_option("parameter", parameter, "resolution, s, a, b or n")
      ->required()
      ->check(CLI::IsMember(sweep_parameters()));
  add_common(*sweep, sweep_opts);

  CLI::App* moment = app.add_subcommand("moments", "radial moments about the base point");
  add_common(*moment, moments_opts);

  CLI::App* fit = app.add_subcommand("fit-potential", "fit f >= r^2/4 - a r - b on each shell");
  add_common(*fit, fit_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    CommandResult result;
    RunConfig config;
    if (info->parsed()) {
      config = build_config(*info, info_opts);
      result = cmd_model_info(config);
    } else if (check->parsed()) {
      config = build_config(*check, check_opts);
      result = cmd_check(config, theorem_id);
    } else if (sweep->parsed()) {
      config = build_config(*sweep, sweep_opts);
      result = cmd_sweep(config, parameter);
    } else if (moment->parsed()) {
      config = build_config(*moment, moments_opts);
      result = cmd_moments(config);
    } else {
      config = build_config(*fit, fit_opts);
      result = cmd_fit_potential(config);
    }
    emit(config, result);
    return result.passed ? kExitPass : kExitFail;
  } catch (const Error& e) {
    std::cerr << "shrinker-ot: " << e.what() << '\n';
    return is_usage(e.code()) ? kExitUsage : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "shrinker-ot: " << e.what() << '\n';
    return kExitError;
  }
}
