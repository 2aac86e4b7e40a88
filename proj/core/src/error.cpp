#include "shrinker_ot/error.hpp"

namespace shrinker_ot {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain: return "domain";
    case ErrorCode::CutLocus: return "cut-locus";
    case ErrorCode::Config: return "config";
    case ErrorCode::Numeric: return "numeric";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::Capacity: return "capacity";
    case ErrorCode::Convergence: return "convergence";
    case ErrorCode::AbsoluteContinuity: return "absolute-continuity";
    case ErrorCode::Consistency: return "consistency";
    case ErrorCode::Fit: return "fit";
    case ErrorCode::EmptyRestriction: return "empty-restriction";
    case ErrorCode::Type: return "type";
    case ErrorCode::Usage: return "usage";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + " error: " + message), code_(code) {}

}  // namespace shrinker_ot
