#include <doctest.h>

#include <cmath>

#include "hh/atlas.hpp"
#include "hh/closed_forms.hpp"
#include "hh/numerics.hpp"
#include "hh/radial_probe.hpp"

using namespace hh;

namespace {

constexpr Domain F = Domain::FullSpace;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

// first zero of u'' + (2/r) u' + u^3 = 0, u(0) = 1, by fixed-step RK4 from the series start
double lane_emden_zero_rk4(double h) {
  double r = 1e-3, u = 1.0 - r * r / 6.0, v = -r / 3.0;
  const auto f = [](double r, double u, double v) { return std::array<double, 2>{v, -2.0 / r * v - u * u * u}; };
  for (;;) {
    const auto k1 = f(r, u, v);
    const auto k2 = f(r + h / 2, u + h / 2 * k1[0], v + h / 2 * k1[1]);
    const auto k3 = f(r + h / 2, u + h / 2 * k2[0], v + h / 2 * k2[1]);
    const auto k4 = f(r + h, u + h * k3[0], v + h * k3[1]);
    const double un = u + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    const double vn = v + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    if (un <= 0.0) return r + h * u / (u - un);
    r += h;
    u = un;
    v = vn;
  }
}

}  // namespace

TEST_CASE("subcritical shot crosses zero where the RK4 oracle says") {
  const ShotOutcome s = shoot({3, 3.0, 0.0, F}, 1.0, 0.0, 100.0, 1e-10);
  REQUIRE(s.fate.kind == FateKind::CrossedZero);
  CHECK(std::isnan(s.fate.min_value));
  REQUIRE(std::holds_alternative<ZeroCrossing>(s.trajectory.termination()));
  CHECK(std::get<ZeroCrossing>(s.trajectory.termination()).location == s.fate.r);
  // linear interpolation of the last RK4 step limits the oracle to ~h^2
  CHECK(s.fate.r == doctest::Approx(lane_emden_zero_rk4(1e-4)).epsilon(1e-6));
  CHECK(s.fate.r == doctest::Approx(6.896848619).epsilon(1e-7));
  CHECK(s.r0 == doctest::Approx(1e-4));
}

TEST_CASE("bubble shot stays positive and tracks the closed form") {
  const ShotOutcome s = shoot({3, 5.0, 0.0, F}, std::pow(3.0, 0.25), 0.0, 1000.0, 1e-10);
  REQUIRE(s.fate.kind == FateKind::Positive);
  CHECK(s.fate.r == 1000.0);
  CHECK(s.fate.min_value > 0.0);
  const ClosedForm b = bubble(3);
  double worst = 0.0;
  for (double r : logspace(s.r0, 1000.0, 500)) {
    const double u = evaluate(b, r).u;
    worst = std::max(worst, std::abs(s.trajectory.value_at(r)[0] - u) / u);
  }
  CHECK(worst < 1e-6);
  CHECK(monotone_diagnostics(s).all());
}

TEST_CASE("non-existence cells fail early") {
  for (double u0 : {0.1, 1.0, 10.0}) {
    const ShotOutcome a = shoot({2, 0.0, -3.0, F}, u0, 0.0, 1000.0, 1e-10);
    CHECK(a.fate.kind != FateKind::Positive);
    CHECK(a.fate.r < 10.0);
    const ShotOutcome b = shoot({2, -1.0, 1.0, F}, u0, 0.0, 1000.0, 1e-10);
    CHECK(b.fate.kind != FateKind::Positive);
    CHECK(b.fate.r < 100.0);
  }
}

TEST_CASE("shoot rejects bad input") {
  CHECK(code_of([] { shoot({3, 3.0, 0.0, F}, 0.0, 0.0, 10.0, 1e-10); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { shoot({3, 3.0, 0.0, F}, 1.0, 0.0, -1.0, 1e-10); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { shoot({1, 3.0, 0.0, Domain::HalfLine}, 1.0, 0.0, 10.0, 1e-10); }) == ErrorCode::WrongDimension);
}

TEST_CASE("nonexistence_scan") {
  const std::vector<double> u0s = logspace(0.1, 10.0, 25);
  SUBCASE("subcritical cell: every shot crosses zero") {
    const ScanReport r = nonexistence_scan({3, 3.0, 0.0, F}, u0s, {0.0}, 1000.0, 1e-10);
    REQUIRE(r.shots.size() == 25);
    for (const auto& s : r.shots) CHECK(s.fate.kind == FateKind::CrossedZero);
    CHECK(r.red_alerts.empty());
    CHECK(r.red_alert_dumps.empty());
    // scaling: r* u0 is constant for p = 3, sigma = 0
    for (const auto& s : r.shots) CHECK(s.fate.r * s.u0 == doctest::Approx(6.896848619).epsilon(1e-6));
  }
  SUBCASE("n = 2, p = -1, sigma = 1: all fail before r = 100") {
    const ScanReport r = nonexistence_scan({2, -1.0, 1.0, F}, u0s, {0.0}, 1000.0, 1e-10);
    for (const auto& s : r.shots) CHECK(s.fate.r < 100.0);
    CHECK(r.red_alerts.empty());
  }
  SUBCASE("supercritical input is rejected") {
    CHECK(code_of([&] { nonexistence_scan({3, 5.0, 0.0, F}, u0s, {0.0}, 1000.0, 1e-10); }) ==
          ErrorCode::PreconditionUnmet);
  }
  SUBCASE("default cells: no red alerts, nonzero slopes included") {
    const auto cells = default_scan_cells();
    REQUIRE(cells.size() == 6);
    for (const ProblemParams& P : cells) {
      CHECK_FALSE(classify(P).exists);
      const ScanReport r = nonexistence_scan(P, logspace(0.1, 10.0, 5), {-0.5, 0.0, 0.5}, 1000.0, 1e-10);
      CHECK(r.red_alerts.empty());
    }
  }
}

TEST_CASE("property: diagnostics hold on positive segments for p <= 0") {
  for (const ProblemParams& P : {ProblemParams{2, 0.0, -3.0, F}, ProblemParams{2, -1.0, 1.0, F},
                                 ProblemParams{3, -2.0, 0.0, F}, ProblemParams{4, 0.0, 1.0, F}}) {
    for (double u0 : logspace(0.1, 10.0, 7)) {
      const ShotOutcome s = shoot(P, u0, 0.0, 1000.0, 1e-10);
      INFO("n=" << P.n << " p=" << P.p << " sigma=" << P.sigma << " u0=" << u0);
      CHECK(monotone_diagnostics(s).all());
    }
  }
}

TEST_CASE("diagnostics reject an increasing profile") {
  TrajectoryBuilder b;
  for (int i = 1; i <= 20; ++i) {
    const double r = 0.1 * i;
    if (i == 1) {
      b.start(r, {1.0 + r, 1.0}, {1.0, 0.0});
    } else {
      b.push_hermite(r, {1.0 + r, 1.0}, {1.0, 0.0});
    }
  }
  const Trajectory t = std::move(b).finish(ReachedSpanEnd{}, 0.0);
  const MonotoneReport m = monotone_diagnostics(t, 3, 1.0);
  CHECK_FALSE(m.all());
  CHECK_FALSE(m.u_nonincreasing);
  CHECK_FALSE(m.flux_nonpositive);
  CHECK_FALSE(m.bounded_by_u0);
}
