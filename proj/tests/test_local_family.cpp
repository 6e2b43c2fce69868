#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hh/closed_forms.hpp"
#include "hh/local_family.hpp"

using namespace hh;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

const double kSlope = std::pow(25.0 / 6.0, 0.2);

}  // namespace

TEST_CASE("case C1 membership") {
  CHECK(in_case_c1(-4.0, 1.0));
  CHECK_FALSE(in_case_c1(-2.0, 1.0));
  CHECK_FALSE(in_case_c1(-4.0, -2.0));
  CHECK(code_of([] { picard_local(4.0, -4.0, 0.1, 0.1); }) == ErrorCode::InvalidParams);
}

TEST_CASE("picard_local: w0 = 2/5 reproduces (1+x)^(2/5) - 1") {
  const LocalSolution L = picard_local(-4.0, 1.0, 0.4, 0.1);
  CHECK(L.a == doctest::Approx(0.6));
  CHECK(L.mu_plus == doctest::Approx(1.0));
  CHECK(L.T <= 0.1);
  double worst = 0.0;
  for (std::size_t i = 0; i < L.x.size(); ++i) worst = std::max(worst, std::abs(L.w[i] - (std::pow(1.0 + L.x[i], 0.4) - 1.0)));
  CHECK(worst < 1e-6);
  CHECK(L.residual < 1e-7);
  CHECK(std::abs(L.eta[1] - L.w0) < 1e-4);
  for (std::size_t i = 2; i < L.x.size(); ++i) CHECK(L.w[i] > L.w[i - 1]);
  // the interpolated state agrees with the closed form between grid points
  const double x = 0.5 * (L.x[10] + L.x[11]);
  CHECK(L.at(x)[0] == doctest::Approx(std::pow(1.0 + x, 0.4) - 1.0).epsilon(1e-6));
  CHECK(L.at(x)[1] == doctest::Approx(0.4 * x * std::pow(1.0 + x, -0.6)).epsilon(1e-5));
}

TEST_CASE("picard_local: w0 = 0 gives the power law itself") {
  const LocalSolution L = picard_local(-4.0, 1.0, 0.0, 0.1);
  for (double w : L.w) CHECK(w == 0.0);
}

TEST_CASE("picard_local: negative w0 stays below u_a and decreases") {
  const LocalSolution L = picard_local(-4.0, 1.0, -0.04, 0.05);
  for (std::size_t i = 1; i < L.x.size(); ++i) {
    CHECK(L.w[i] < 0.0);
    CHECK(L.xdw[i] < 0.0);
  }
  CHECK(std::abs(L.eta[1] + 0.04) < 1e-4);
}

TEST_CASE("extend_family matches the closed form") {
  const FamilyMember m = extend_family(picard_local(-4.0, 1.0, 0.4, 0.1), 1000.0, 1e-11);
  const ClosedForm ref = family_member(1.0);
  double worst = 0.0;
  for (double x : logspace(1e-3, 1000.0, 400)) {
    const double u = evaluate(ref, x).u;
    worst = std::max(worst, std::abs(m.at(x)[0] - u) / u);
  }
  CHECK(worst < 1e-6);
  CHECK(m.violations == 0);
  CHECK(m.above_ua);
  CHECK(m.du_nonincreasing);
  CHECK(m.u_nondecreasing);
  // u(x)/x -> (25/6)^(1/5); the correction decays like x^(-1)
  CHECK(m.slope_estimate == doctest::Approx(kSlope).epsilon(2e-3));
  const FamilyMember shorter = extend_family(picard_local(-4.0, 1.0, 0.4, 0.1), 100.0, 1e-11);
  CHECK(std::abs(m.slope_estimate - kSlope) < std::abs(shorter.slope_estimate - kSlope));
}

TEST_CASE("extend_family with w0 = 0 stays on u_a") {
  const FamilyMember m = extend_family(picard_local(-4.0, 1.0, 0.0, 0.1), 100.0, 1e-10);
  const ClosedForm ua{power_law(-4.0, 1.0)};
  for (double x : logspace(1e-3, 100.0, 200)) CHECK(m.at(x)[0] == doctest::Approx(evaluate(ua, x).u).epsilon(1e-9));
  CHECK(m.violations == 0);
  CHECK(code_of([] { extend_family(picard_local(-4.0, 1.0, -0.04, 0.05), 10.0, 1e-10); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("property: family consistency with alpha = 5/2 w0") {
  for (double w0 : {0.1, 0.2, 0.4}) {
    const FamilyMember m = extend_family(picard_local(-4.0, 1.0, w0, 0.1), 100.0, 1e-11);
    const ClosedForm ref = family_member(2.5 * w0);
    for (double x : logspace(m.local.T, 100.0, 200)) {
      const double u = evaluate(ref, x).u;
      CHECK(std::abs(m.at(x)[0] - u) <= 1e-5 * u);
    }
  }
}

TEST_CASE("property: order preservation") {
  const FamilyMember lo = extend_family(picard_local(-4.0, 1.0, 0.2, 0.1), 100.0, 1e-10);
  const FamilyMember hi = extend_family(picard_local(-4.0, 1.0, 0.4, 0.1), 100.0, 1e-10);
  const FamilyMember base = extend_family(picard_local(-4.0, 1.0, 0.0, 0.1), 100.0, 1e-10);
  for (double x : logspace(1e-4, 100.0, 500)) {
    CHECK(hi.at(x)[0] > lo.at(x)[0]);
    CHECK(lo.at(x)[0] > base.at(x)[0]);
  }
}

TEST_CASE("property: asymptotic sandwich and monotone diagnostics") {
  for (double w0 : {0.05, 0.3}) {
    const FamilyMember m = extend_family(picard_local(-4.0, 1.0, w0, 0.1), 500.0, 1e-10);
    const double c = m.at(1.0)[0];
    double C = 0.0;
    for (double x : logspace(1.0, 500.0, 300)) C = std::max(C, m.at(x)[0] / x);
    double prev_ratio = INFINITY, prev_u = 0.0, prev_du = INFINITY;
    for (double x : logspace(1.0, 500.0, 300)) {
      const State s = m.at(x);
      CHECK(s[0] >= c);
      CHECK(s[0] <= C * x * (1 + 1e-12));
      // concave and through u(0) = 0, so u(x)/x does not increase
      CHECK(s[0] / x <= prev_ratio * (1 + 1e-12));
      CHECK(s[0] >= prev_u);
      CHECK(s[1] <= prev_du * (1 + 1e-12));
      prev_ratio = s[0] / x;
      prev_u = s[0];
      prev_du = s[1];
    }
  }
}

TEST_CASE("below_ua experiments") {
  const BelowUaReport r = below_ua_experiment(-4.0, 1.0, -0.04, 1000.0, 1e-10);
  CHECK(r.failed);
  CHECK(r.kind != CertificateKind::None);
  CHECK(std::isfinite(r.x_star));
  CHECK(r.x_star > 0.0);
  // closed-form member with alpha = 5/2 w0 = -0.1 vanishes at x = 10
  CHECK(r.x_star == doctest::Approx(10.0).epsilon(1e-6));
  if (r.kind == CertificateKind::ZeroCrossing) {
    // u ~ (x* - x)^(2/5) at a singular zero, so a small u still pins x* tightly
    double peak = 0.0;
    for (const auto& s : r.tail.samples()) peak = std::max(peak, s.y[0]);
    CHECK(std::abs(r.tail.value_at(r.x_star)[0]) < 1e-4 * peak);
  }

  const BelowUaReport tiny = below_ua_experiment(-4.0, 1.0, -1e-6, 1000.0, 1e-10);
  CHECK(tiny.failed);
  CHECK(tiny.x_star > r.x_star);

  const BelowUaReport control = below_ua_experiment(-4.0, 1.0, 0.0, 1000.0, 1e-10);
  CHECK_FALSE(control.failed);
  CHECK(control.kind == CertificateKind::None);
  CHECK(code_of([] { below_ua_experiment(-4.0, 1.0, 0.1, 100.0, 1e-10); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("sturm comparison") {
  SUBCASE("comparison cosine has zeros pi/K apart") {
    const double a = 0.6, m = 1.0;
    const double K = 0.5 * std::sqrt(4 * m - (2 * a - 1) * (2 * a - 1));
    const auto V0 = [&](double z) { return std::exp(-(2 * a - 1) * z / 2) * std::cos(K * (z - 0.3)); };
    const std::vector<double> z = linspace(0.0, 30.0, 30001);
    std::vector<double> v;
    for (double t : z) v.push_back(V0(t));
    const ZeroCount zc = zero_count(z, v);
    REQUIRE(zc.count >= 2);
    for (std::size_t i = 1; i < zc.locations.size(); ++i) {
      CHECK(zc.locations[i] - zc.locations[i - 1] == doctest::Approx(std::numbers::pi / K).epsilon(1e-8));
    }
  }
  SUBCASE("decaying orbit below one changes sign inside the window") {
    const LienardSystem sys = make_lienard(0.6, -4.0);
    const ManifoldLaunch L = unstable_manifold_launch(sys, Equilibrium::One, 1e-6, -1);
    const Trajectory o = integrate_orbit(sys, L.state, L.z0, 40.0, 1e-10);
    const double z2 = sturm_entry_point(sys, o, 1.0);
    const SturmReport rep = sturm_compare(sys, o, 1.0, z2);
    CHECK(rep.K == doctest::Approx(0.5 * std::sqrt(4.0 - 0.04)));
    CHECK(rep.b == doctest::Approx(z2 + std::numbers::pi / rep.K));
    REQUIRE(rep.zero_found.has_value());
    CHECK(*rep.zero_found > rep.z2);
    CHECK(*rep.zero_found < rep.b);
    CHECK(std::holds_alternative<ZeroCrossing>(o.termination()));
  }
  SUBCASE("constant V = 1 never meets the precondition") {
    const LienardSystem sys = make_lienard(0.6, -4.0);
    const Trajectory one = integrate_orbit(sys, {1.0, 0.0}, 0.0, 10.0, 1e-10);
    CHECK(code_of([&] { sturm_entry_point(sys, one, 1.0); }) == ErrorCode::PreconditionUnmet);
    for (double z2 : {one.t_begin(), one.t_end()}) CHECK(code_of([&] { sturm_compare(sys, one, 1.0, z2); }) == ErrorCode::PreconditionUnmet);
    CHECK(code_of([&] { sturm_compare(sys, one, 0.001, 0.0); }) == ErrorCode::InvalidArgument);
  }
}
