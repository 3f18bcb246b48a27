#include "gflow/error.hpp"

namespace gflow {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInnerSolveFailed: return "InnerSolveFailed";
    case ErrorCode::kStepTooLarge: return "StepTooLarge";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kAntipodalPoint: return "AntipodalPoint";
    case ErrorCode::kNonMonotone: return "NonMonotone";
    case ErrorCode::kInitialNotMonotone: return "InitialNotMonotone";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kNonFiniteObjective: return "NonFiniteObjective";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message,
                           std::optional<std::size_t> step) {
  std::string out(to_string(code));
  if (step) out += " at step k=" + std::to_string(*step);
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> step)
    : std::runtime_error(format_message(code, message, step)),
      code_(code),
      detail_(message),
      step_(step) {}

}  // namespace gflow
