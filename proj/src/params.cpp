#include "hh/params.hpp"

#include <cmath>

#include "hh/error.hpp"

namespace hh {

std::string_view to_string(Domain domain) noexcept {
  return domain == Domain::HalfLine ? "HalfLine" : "FullSpace";
}

Domain parse_domain(std::string_view text) {
  if (text == "full" || text == "FullSpace") return Domain::FullSpace;
  if (text == "half" || text == "HalfLine") return Domain::HalfLine;
  throw Error(ErrorCode::InvalidArgument, "unknown domain '" + std::string(text) + "' (expected full|half)");
}

void validate(const ProblemParams& params) {
  if (params.n < 1) throw Error(ErrorCode::InvalidParams, "dimension n must be >= 1");
  if (!std::isfinite(params.p) || !std::isfinite(params.sigma)) {
    throw Error(ErrorCode::InvalidParams, "p and sigma must be finite");
  }
  if (params.domain == Domain::HalfLine && params.n != 1) {
    throw Error(ErrorCode::InvalidParams, "the half-line domain requires n = 1");
  }
}

}  // namespace hh
