#include "hh/radial_probe.hpp"

#include <cmath>
#include <limits>

#include "hh/atlas.hpp"
#include "hh/error.hpp"
#include "hh/numerics.hpp"

namespace hh {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSingularLevel = 1e-3;

bool within(double next, double prev) { return next <= prev + 1e-9 * std::max(1.0, std::abs(prev)); }

}  // namespace

std::string to_string(FateKind kind) {
  switch (kind) {
    case FateKind::CrossedZero: return "CrossedZero";
    case FateKind::Positive: return "Positive";
    case FateKind::BlewUpNegative: return "BlewUpNegative";
  }
  return "Positive";
}

ShotOutcome shoot(const ProblemParams& params, double u0, double slope0, double r_max, double tol) {
  validate(params);
  if (params.n < 2) throw Error(ErrorCode::WrongDimension, "shoot: radial shots need n >= 2");
  if (!(u0 > 0.0) || !std::isfinite(u0)) throw Error(ErrorCode::InvalidArgument, "shoot: u0 must be > 0");
  if (!std::isfinite(slope0)) throw Error(ErrorCode::InvalidArgument, "shoot: slope0 must be finite");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw Error(ErrorCode::InvalidArgument, "shoot: r_max must be > 0");

  const int n = params.n;
  const double p = params.p, sigma = params.sigma;
  const double r0 = 1e-6 * r_max;
  State y0{u0 + slope0 * r0, slope0};
  if (2.0 + sigma > 0.0 && n + sigma > 0.0) {
    const double k = std::pow(u0, p) / ((2.0 + sigma) * (n + sigma));
    y0[0] -= k * std::pow(r0, 2.0 + sigma);
    y0[1] -= k * (2.0 + sigma) * std::pow(r0, 1.0 + sigma);
  }

  const VectorField field = [n, p, sigma](double r, const State& y) -> State {
    return {y[1], -(n - 1) * y[1] / r - std::pow(r, sigma) * continued_power(y[0], p)};
  };
  EventSpec events;
  events.zero_function = [](double, const State& y) { return y[0]; };
  ShotOutcome out{params, u0, slope0, r0, {}, {FateKind::Positive, r_max, kNaN}};
  if (!(y0[0] > 0.0)) {
    // launch point already past a zero of the expansion
    TrajectoryBuilder b;
    b.start(r0, y0, field(r0, y0));
    out.trajectory = std::move(b).finish(ZeroCrossing{r0}, tol);
    out.fate = {FateKind::CrossedZero, r0, kNaN};
    return out;
  }
  out.trajectory = integrate_to_zero(field, y0, r0, r_max, tol, events, {}, kSingularLevel);

  const auto& term = out.trajectory.termination();
  if (const auto* zc = std::get_if<ZeroCrossing>(&term)) {
    out.fate = {FateKind::CrossedZero, zc->location, kNaN};
  } else if (const auto* esc = std::get_if<Escape>(&term)) {
    const State last = out.trajectory.back().y;
    out.fate = last[1] < 0.0 ? Fate{FateKind::BlewUpNegative, esc->location, kNaN} : Fate{FateKind::Positive, esc->location, kNaN};
  }
  if (out.fate.kind == FateKind::Positive) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& s : out.trajectory.samples()) lo = std::min(lo, s.y[0]);
    out.fate.min_value = lo;
  }
  return out;
}

MonotoneReport monotone_diagnostics(const Trajectory& trajectory, int n, double u0) {
  MonotoneReport r{true, true, true, true};
  const auto samples = trajectory.samples();
  double prev_u = 0.0, prev_flux = 0.0;
  bool first = true;
  for (const auto& s : samples) {
    if (!(s.y[0] > 0.0)) break;
    const double flux = std::pow(s.t, n - 1) * s.y[1];
    if (!within(s.y[0], u0)) r.bounded_by_u0 = false;
    if (!within(flux, 0.0)) r.flux_nonpositive = false;
    if (!first) {
      if (!within(s.y[0], prev_u)) r.u_nonincreasing = false;
      if (!within(flux, prev_flux)) r.flux_nonincreasing = false;
    }
    prev_u = s.y[0];
    prev_flux = flux;
    first = false;
  }
  return r;
}

MonotoneReport monotone_diagnostics(const ShotOutcome& outcome) {
  return monotone_diagnostics(outcome.trajectory, outcome.params.n, outcome.u0);
}

ScanReport nonexistence_scan(const ProblemParams& params, const std::vector<double>& u0s,
                             const std::vector<double>& slopes, double r_max, double tol) {
  if (u0s.empty() || slopes.empty()) throw Error(ErrorCode::InvalidArgument, "nonexistence_scan: empty shot grid");
  if (classify(params).exists) {
    throw Error(ErrorCode::PreconditionUnmet, "nonexistence_scan: the atlas says a solution exists here");
  }
  ScanReport report{params, r_max, {}, {}, {}};
  for (double u0 : u0s) {
    for (double slope : slopes) {
      ShotOutcome shot = shoot(params, u0, slope, r_max, tol);
      report.shots.push_back({u0, slope, shot.fate});
      if (shot.fate.kind == FateKind::Positive) {
        report.red_alerts.push_back(report.shots.size() - 1);
        report.red_alert_dumps.push_back(std::move(shot.trajectory));
      }
    }
  }
  return report;
}

std::vector<ProblemParams> default_scan_cells() {
  return {
      {3, 3.0, 0.0, Domain::FullSpace},   {2, -1.0, 1.0, Domain::FullSpace}, {2, 0.5, -1.0, Domain::FullSpace},
      {3, 0.0, -3.0, Domain::FullSpace},  {2, 0.0, -3.0, Domain::FullSpace}, {2, 5.0, 0.0, Domain::FullSpace},
  };
}

}  // namespace hh
