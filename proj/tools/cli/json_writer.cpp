#include "json_writer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace shrinker_ot::cli {
namespace {

void write_string(std::ostream& out, const std::string& text) {
  // nlohmann escapes strings; reuse it for a bare string value.
  out << Json(text).dump();
}

void write_value(std::ostream& out, const Json& value, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (value.type()) {
    case Json::value_t::object: {
      if (value.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out << ",\n";
        first = false;
        out << pad;
        write_string(out, key);
        out << ": ";
        write_value(out, item, indent + 2);
      }
      out << '\n' << close << '}';
      return;
    }
    case Json::value_t::array: {
      if (value.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i > 0) out << ",\n";
        out << pad;
        write_value(out, value[i], indent + 2);
      }
      out << '\n' << close << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = value.get<double>();
      out << (std::isfinite(x) ? format_double(x) : std::string("null"));
      return;
    }
    default: out << value.dump(); return;
  }
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  return fmt::format("{:.17g}", value);
}

void write_json(std::ostream& out, const Json& value) {
  write_value(out, value, 0);
  out << '\n';
}

std::string dump_json(const Json& value) {
  std::ostringstream out;
  write_json(out, value);
  return out.str();
}

Json to_json(const NamedValues& values) {
  Json out = Json::object();
  for (const auto& [name, value] : values.entries()) out[name] = value;
  return out;
}

Json to_json(const BoundReport& report) {
  Json out = Json::object();
  out["theorem_id"] = report.theorem_id;
  out["passed"] = report.passed;
  out["lhs"] = report.lhs;
  out["rhs"] = report.rhs;
  out["margin"] = report.margin;
  out["tolerance"] = report.tolerance;
  out["constants"] = to_json(report.constants);
  out["discretization"] = Json::object();
  out["discretization"]["scheme"] = report.scheme;
  for (const auto& [name, value] : report.discretization.entries()) {
    out["discretization"][name] = value;
  }
  out["notes"] = report.notes;
  return out;
}

void Table::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_field(header[i]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
}

Table reports_table(const std::vector<BoundReport>& reports,
                    const std::vector<std::string>& leading,
                    const std::vector<std::vector<std::string>>& leading_values) {
  Table table;
  table.header = leading;
  for (const char* name : {"theorem_id", "passed", "lhs", "rhs", "margin", "tolerance", "scheme"}) {
    table.header.emplace_back(name);
  }
  std::vector<std::string> extra;
  const auto note_column = [&](const std::string& name) {
    if (std::find(extra.begin(), extra.end(), name) == extra.end()) extra.push_back(name);
  };
  for (const BoundReport& r : reports) {
    for (const auto& entry : r.constants.entries()) note_column(entry.first);
    for (const auto& entry : r.discretization.entries()) note_column(entry.first);
  }
  table.header.insert(table.header.end(), extra.begin(), extra.end());

  for (std::size_t i = 0; i < reports.size(); ++i) {
    const BoundReport& r = reports[i];
    std::vector<std::string> row;
    if (i < leading_values.size()) row = leading_values[i];
    row.resize(leading.size());
    row.push_back(r.theorem_id);
    row.emplace_back(r.passed ? "true" : "false");
    row.push_back(format_double(r.lhs));
    row.push_back(format_double(r.rhs));
    row.push_back(format_double(r.margin));
    row.push_back(format_double(r.tolerance));
    row.push_back(r.scheme);
    for (const std::string& name : extra) {
      std::optional<double> v = r.constants.find(name);
      if (!v) v = r.discretization.find(name);
      row.push_back(v ? format_double(*v) : std::string());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace shrinker_ot::cli
