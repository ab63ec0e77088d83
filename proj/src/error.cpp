#include "imcons/error.hpp"

namespace imcons {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kIterationLimit: return "IterationLimit";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kOriginNotInterior: return "OriginNotInterior";
    case ErrorCode::kEmptyInterior: return "EmptyInterior";
    case ErrorCode::kHorizonExceeded: return "HorizonExceeded";
    case ErrorCode::kEmptyInterval: return "EmptyInterval";
    case ErrorCode::kNoUnitEigenvector: return "NoUnitEigenvector";
    case ErrorCode::kScalingImpossible: return "ScalingImpossible";
    case ErrorCode::kRegulatorInfeasible: return "RegulatorInfeasible";
    case ErrorCode::kUnstableFeedback: return "UnstableFeedback";
    case ErrorCode::kNotInitialized: return "NotInitialized";
    case ErrorCode::kInvariantBroken: return "InvariantBroken";
    case ErrorCode::kNegativeDiagonal: return "NegativeDiagonal";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kAssumptionFailure: return "AssumptionFailure";
    case ErrorCode::kConstraintViolation: return "ConstraintViolation";
    case ErrorCode::kConfig: return "Config";
  }
  return "Unknown";
}

}  // namespace imcons
