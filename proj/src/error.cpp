#include "hh/error.hpp"

namespace hh {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::DegenerateExponent: return "DegenerateExponent";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NegativeAlpha: return "NegativeAlpha";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::UndefinedPower: return "UndefinedPower";
    case ErrorCode::PotentialSingularity: return "PotentialSingularity";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::NonFiniteField: return "NonFiniteField";
    case ErrorCode::StepLimitExceeded: return "StepLimitExceeded";
    case ErrorCode::PreconditionUnmet: return "PreconditionUnmet";
    case ErrorCode::Inconclusive: return "Inconclusive";
    case ErrorCode::LostPositivity: return "LostPositivity";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace hh
