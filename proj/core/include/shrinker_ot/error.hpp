#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shrinker_ot {

enum class ErrorCode {
  Domain,              // point outside a model's coordinate domain
  CutLocus,            // tangent vector outside Omega, or point on the cut locus
  Config,              // unsupported scheme or malformed configuration
  Numeric,             // non-finite value encountered
  Precondition,        // caller violated a documented precondition
  Capacity,            // problem exceeds a configured size cap
  Convergence,         // iterative solver did not reach its tolerance
  AbsoluteContinuity,  // eta has mass where nu has none
  Consistency,         // two independent routes disagree
  Fit,                 // potential-bound fit infeasible
  EmptyRestriction,    // restriction removed every atom
  Type,                // incompatible point spaces
  Usage,               // command-line usage error
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace shrinker_ot
