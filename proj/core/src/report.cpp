#include "shrinker_ot/report.hpp"

#include <algorithm>
#include <cmath>

#include "shrinker_ot/error.hpp"

namespace shrinker_ot {

void NamedValues::set(std::string_view name, double value) {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const auto& e) { return e.first == name; });
  if (it != entries_.end()) {
    it->second = value;
  } else {
    entries_.emplace_back(std::string(name), value);
  }
}

std::optional<double> NamedValues::find(std::string_view name) const {
  for (const auto& [key, value] : entries_) {
    if (key == name) return value;
  }
  return std::nullopt;
}

double NamedValues::at(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw Error(ErrorCode::Precondition, "no value named '" + std::string(name) + "'");
}

void BoundReport::finalize() {
  margin = rhs - lhs;
  passed = std::isfinite(lhs) && std::isfinite(rhs) && lhs <= rhs + tolerance;
}

void BoundReport::finalize(bool extra_condition, std::string_view reason_if_false) {
  finalize();
  if (!extra_condition) {
    passed = false;
    notes.emplace_back(reason_if_false);
  }
}

}  // namespace shrinker_ot
