#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "shrinker_ot/report.hpp"

namespace shrinker_ot::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Pretty-printed JSON with every double written as %.17g; non-finite doubles become null.
void write_json(std::ostream& out, const Json& value);
std::string dump_json(const Json& value);

Json to_json(const NamedValues& values);
Json to_json(const BoundReport& report);

/// A flat table: one header row, comma separated, '.' decimal.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write_csv(std::ostream& out) const;
};

std::string format_double(double value);

/// One row per report; constants and discretization entries become columns,
/// in first-seen order, empty where a report lacks them.
/// `leading` columns come first, with leading_values[i] filling row i.
Table reports_table(const std::vector<BoundReport>& reports,
                    const std::vector<std::string>& leading = {},
                    const std::vector<std::vector<std::string>>& leading_values = {});

}  // namespace shrinker_ot::cli
