#include "ortholab/error.hpp"

namespace ortholab {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kZeroVector: return "zero_vector";
    case ErrorCode::kRankDeficient: return "rank_deficient";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kChartFailure: return "coordinate_chart_failure";
    case ErrorCode::kDegenerateFunctional: return "degenerate_functional";
    case ErrorCode::kNoConvergence: return "no_convergence";
    case ErrorCode::kBudgetExhausted: return "budget_exhausted";
    case ErrorCode::kExistenceSearchFailed: return "existence_search_failed";
    case ErrorCode::kUnstable: return "unstable";
    case ErrorCode::kRankNotSaturated: return "rank_not_saturated";
    case ErrorCode::kTransversalityFailure: return "transversality_failure";
    case ErrorCode::kRejectionBudgetExhausted: return "rejection_budget_exhausted";
  }
  return "unknown";
}

bool is_solver_failure(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kNoConvergence:
    case ErrorCode::kBudgetExhausted:
    case ErrorCode::kExistenceSearchFailed:
    case ErrorCode::kUnstable:
    case ErrorCode::kRankNotSaturated:
    case ErrorCode::kTransversalityFailure:
    case ErrorCode::kRejectionBudgetExhausted:
      return true;
    default:
      return false;
  }
}

}  // namespace ortholab
