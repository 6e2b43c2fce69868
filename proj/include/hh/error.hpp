#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hh {

/// Failure categories shared by every module. The C API maps these
/// one-to-one onto `hh_status` values.
enum class ErrorCode {
  InvalidArgument,
  InvalidParams,
  DegenerateExponent,
  NotPositive,
  NegativeAlpha,
  WrongDimension,
  UndefinedPower,
  PotentialSingularity,
  NonPositiveValue,
  NoConvergence,
  StepSizeUnderflow,
  NonFiniteField,
  StepLimitExceeded,
  PreconditionUnmet,
  Inconclusive,
  LostPositivity,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hh
