#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hh/closed_forms.hpp"
#include "hh/params.hpp"

namespace hh {

struct RegimeVerdict {
  bool exists = false;
  std::optional<ClosedForm> witness;
  /// Stable identifier of the table cell that decided the verdict, e.g.
  /// "T1.supercritical" or "T3.sigma_lt_-2.p_gt_-1-sigma".
  std::string rationale;
};

/// Existence of a non-trivial non-negative solution. Total on valid params;
/// throws InvalidParams otherwise. Every comparison is an exact IEEE one.
RegimeVerdict classify(const ProblemParams& params);

/// (n+2+2 sigma)/(n-2) for n > 2, +inf for n <= 2.
double critical_exponent(int n, double sigma);

/// Every rationale tag classify can return ("T1.*": n >= 2, "T2.*": whole
/// line, "T3.*": half-line).
std::span<const std::string_view> rationale_tags();

struct AtlasRecord {
  ProblemParams params;
  RegimeVerdict verdict;
};

/// One record per grid point in input order. An invalid row raises
/// InvalidParams naming its index.
std::vector<AtlasRecord> atlas_export(std::span<const ProblemParams> grid);

}  // namespace hh
