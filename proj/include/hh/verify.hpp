#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hh {

/// One numeric check: passes iff value <= threshold * tolerance_scale.
/// Exact checks count mismatches against a threshold of 0.
struct VerifyCheck {
  std::string suite;
  std::string name;
  bool passed;
  double value;
  double threshold;
  std::string detail;
};

struct VerifyReport {
  std::string suite;
  double tolerance;
  double tolerance_scale;
  std::vector<VerifyCheck> checks;

  int passed() const;
  int failed() const;
};

/// "atlas", "closedforms", "dynamics", "family", "radial" and "all".
std::span<const std::string_view> verify_suites();

/// Runs a suite with integration tolerance `tol`. InvalidArgument for an
/// unknown suite name or a negative scale. Deterministic for fixed inputs.
VerifyReport run_verify(std::string_view suite, double tol = 1e-10, double tolerance_scale = 1.0);

}  // namespace hh
