#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gflow {

enum class ErrorCode {
  kInnerSolveFailed,
  kStepTooLarge,
  kOutOfRange,
  kDimensionMismatch,
  kAntipodalPoint,
  kNonMonotone,
  kInitialNotMonotone,
  kPreconditionViolated,
  kGridMismatch,
  kDegenerateInput,
  kNonFiniteObjective,
  kInvalidArgument,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception type. The code is
// stable and meant for programmatic dispatch; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> step = std::nullopt);

  ErrorCode code() const noexcept { return code_; }

  // Index k of the trajectory step that failed, when raised by a trajectory run.
  std::optional<std::size_t> step() const noexcept { return step_; }

  // Message without the code and step prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<std::size_t> step_;
};

}  // namespace gflow
