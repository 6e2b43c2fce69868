#pragma once

#include <string>
#include <string_view>

namespace hh {

enum class Domain { FullSpace, HalfLine };

std::string_view to_string(Domain domain) noexcept;
/// Accepts "full"/"FullSpace" and "half"/"HalfLine"; throws InvalidArgument otherwise.
Domain parse_domain(std::string_view text);

/// (n, p, sigma) for -Laplace(u) = |x|^sigma u^p, plus the domain flavour for n = 1.
struct ProblemParams {
  int n = 1;
  double p = 0.0;
  double sigma = 0.0;
  Domain domain = Domain::FullSpace;
};

/// Throws InvalidParams unless n >= 1, p and sigma are finite, and HalfLine
/// is only used with n = 1.
void validate(const ProblemParams& params);

}  // namespace hh
