#pragma once

#include <string>
#include <vector>

#include "json_writer.hpp"
#include "run_config.hpp"

namespace shrinker_ot::cli {

struct CommandResult {
  Json document;
  Table table;
  bool passed = true;
};

const std::vector<std::string>& check_ids();
const std::vector<std::string>& sweep_parameters();

CommandResult cmd_model_info(const RunConfig& config);
CommandResult cmd_check(const RunConfig& config, const std::string& theorem_id);
CommandResult cmd_sweep(const RunConfig& config, const std::string& parameter);
CommandResult cmd_moments(const RunConfig& config);
CommandResult cmd_fit_potential(const RunConfig& config);

/// The config as echoed in every JSON document (output paths excluded).
Json config_json(const RunConfig& config);

}  // namespace shrinker_ot::cli
