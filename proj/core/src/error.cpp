#include "hjgraph/error.hpp"

namespace hjg {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::IsolatedNode: return "IsolatedNode";
    case ErrorCode::NotStronglyConnected: return "NotStronglyConnected";
    case ErrorCode::NegativeIntensity: return "NegativeIntensity";
    case ErrorCode::NumericOverflow: return "NumericOverflow";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorCode::StrictnessViolation: return "StrictnessViolation";
    case ErrorCode::PreconditionUnmet: return "PreconditionUnmet";
    case ErrorCode::HypothesisUnmet: return "HypothesisUnmet";
    case ErrorCode::PolicyGridMismatch: return "PolicyGridMismatch";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
  }
  return "Unknown";
}

}  // namespace hjg
