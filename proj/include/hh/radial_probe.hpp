#pragma once

#include <string>
#include <vector>

#include "hh/params.hpp"
#include "hh/trajectory.hpp"

namespace hh {

enum class FateKind { CrossedZero, Positive, BlewUpNegative };
std::string to_string(FateKind kind);

struct Fate {
  FateKind kind;
  double r;          // crossing / blow-up radius, or r_max for Positive
  double min_value;  // smallest u seen (Positive only; NaN otherwise)
};

struct ShotOutcome {
  ProblemParams params;
  double u0;
  double slope0;
  double r0;  // launch radius
  Trajectory trajectory;
  Fate fate;
};

/// Radial shot for u'' + ((n-1)/r) u' + r^sigma u^p = 0 launched at
/// r0 = 1e-6 r_max from the regular expansion at the origin when it exists
/// (2+sigma > 0 and n+sigma > 0), else from (u0, slope0) directly.
ShotOutcome shoot(const ProblemParams& params, double u0, double slope0, double r_max, double tol);

struct MonotoneReport {
  bool u_nonincreasing;
  bool flux_nonincreasing;  // r^(n-1) u' non-increasing
  bool flux_nonpositive;
  bool bounded_by_u0;
  bool all() const { return u_nonincreasing && flux_nonincreasing && flux_nonpositive && bounded_by_u0; }
};

/// Pointwise checks on the positive part of a radial trajectory, each with
/// relative slack 1e-9.
MonotoneReport monotone_diagnostics(const Trajectory& trajectory, int n, double u0);
MonotoneReport monotone_diagnostics(const ShotOutcome& outcome);

struct ShotSummary {
  double u0;
  double slope0;
  Fate fate;
};

struct ScanReport {
  ProblemParams params;
  double r_max;
  std::vector<ShotSummary> shots;
  std::vector<std::size_t> red_alerts;       // indices into shots
  std::vector<Trajectory> red_alert_dumps;   // matching trajectories
};

/// Shoots every (u0, slope0) pair in order. PreconditionUnmet when the atlas
/// says a solution exists. Surviving shots are red alerts, not errors.
ScanReport nonexistence_scan(const ProblemParams& params, const std::vector<double>& u0s,
                             const std::vector<double>& slopes, double r_max, double tol);

/// The six regimes of the default scan set.
std::vector<ProblemParams> default_scan_cells();

}  // namespace hh
