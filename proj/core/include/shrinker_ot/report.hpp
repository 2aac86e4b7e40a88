#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shrinker_ot {

/// Insertion-ordered name -> value table; names are unique.
class NamedValues {
public:
  void set(std::string_view name, double value);
  std::optional<double> find(std::string_view name) const;
  /// Throws Precondition if the name is absent.
  double at(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name).has_value(); }

  const std::vector<std::pair<std::string, double>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const NamedValues&, const NamedValues&) = default;

private:
  std::vector<std::pair<std::string, double>> entries_;
};

/// Outcome of one inequality check. `passed` holds exactly when
/// lhs <= rhs + tolerance; call finalize() after filling lhs/rhs/tolerance.
struct BoundReport {
  std::string theorem_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  NamedValues constants;
  std::string scheme;
  NamedValues discretization;
  std::vector<std::string> notes;
  bool passed = false;

  void finalize();
  /// finalize() plus an extra veto (e.g. a failed drift or consistency test).
  void finalize(bool extra_condition, std::string_view reason_if_false);

  friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

}  // namespace shrinker_ot
