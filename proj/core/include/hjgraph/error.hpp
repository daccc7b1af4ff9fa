#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hjg {

/// Failure categories raised by the library. Report-style checks
/// (validation, comparison sweeps) never throw; they return their findings.
enum class ErrorCode {
  InvalidArgument,
  SelfLoop,
  DuplicateEdge,
  IsolatedNode,
  NotStronglyConnected,
  NegativeIntensity,
  NumericOverflow,
  StepSizeUnderflow,
  NoConvergence,
  MonotonicityViolation,
  StrictnessViolation,
  PreconditionUnmet,
  HypothesisUnmet,
  PolicyGridMismatch,
  SingularSystem,
  ZeroVariance,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hjg
