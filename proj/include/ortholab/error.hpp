#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ortholab {

enum class ErrorCode {
  kInvalidArgument,
  kPrecondition,
  kZeroVector,
  kRankDeficient,
  kDimensionMismatch,
  kChartFailure,
  kDegenerateFunctional,
  kNoConvergence,
  kBudgetExhausted,
  kExistenceSearchFailed,
  kUnstable,
  kRankNotSaturated,
  kTransversalityFailure,
  kRejectionBudgetExhausted,
};

/// Machine-readable name used in CLI error objects ("precondition", ...).
const char* error_code_name(ErrorCode code) noexcept;

/// True for failures of a numerical search (as opposed to bad input).
bool is_solver_failure(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A solver failure that still carries the best result found so far.
template <class Result>
class SolverFailure : public Error {
 public:
  SolverFailure(ErrorCode code, const std::string& message, Result best)
      : Error(code, message), best_(std::move(best)) {}
  const Result& best() const noexcept { return best_; }

 private:
  Result best_;
};

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace ortholab
