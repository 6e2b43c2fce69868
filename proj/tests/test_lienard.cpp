#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hh/lienard.hpp"

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

int count_kind(const Portrait& p, std::size_t index) {
  int k = 0;
  for (const auto& e : p.entries) k += e.orbit && e.orbit->index() == index;
  return k;
}

// -(2a-1) * integral of Vdot^2, trapezoid on a fine dense-output grid
double dissipation(const LienardSystem& sys, const Trajectory& t, int pieces) {
  const double z0 = t.t_begin(), z1 = t.t_end(), h = (z1 - z0) / pieces;
  double sum = 0.0;
  for (int i = 0; i <= pieces; ++i) {
    const double v = t.value_at(i == pieces ? z1 : z0 + i * h)[1];
    sum += (i == 0 || i == pieces ? 0.5 : 1.0) * v * v;
  }
  return -sys.damping * sum * h;
}

}  // namespace

TEST_CASE("system construction") {
  const LienardSystem s = lienard_from_params(-4.0, 1.0);
  CHECK(s.a == doctest::Approx(0.6));
  CHECK(s.damping == doctest::Approx(0.2));
  CHECK(s.stiffness == doctest::Approx(0.24));
  CHECK(lienard_from_params(4.0, -4.0).a == doctest::Approx(2.0 / 3.0));
  CHECK(code_of([] { make_lienard(1.0, 2.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { make_lienard(0.5, NAN); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("vector_field examples") {
  const LienardSystem s = make_lienard(0.6, -4.0);
  const State f = vector_field(s, {2.0, 0.0});
  CHECK(f[0] == 0.0);
  CHECK(f[1] == doctest::Approx(0.465).epsilon(1e-14));
  CHECK(vector_field(s, {1.0, 0.0}) == State{0.0, 0.0});
  CHECK(vector_field(make_lienard(0.5, 5.0), {0.0, 0.0}) == State{0.0, 0.0});
  CHECK(code_of([&] { vector_field(s, {0.0, 0.0}); }) == ErrorCode::UndefinedPower);
  CHECK(code_of([] { vector_field(make_lienard(0.5, 0.5), {-0.1, 0.0}); }) == ErrorCode::UndefinedPower);
}

TEST_CASE("energy examples") {
  const LienardSystem s = make_lienard(2.0 / 3.0, 4.0);
  CHECK(energy(s, {0.0, 0.0}) == doctest::Approx(1.0 / 15.0).epsilon(1e-14));
  CHECK(energy(s, {1.0, 0.0}) == 0.0);
  CHECK(energy(s, {1.0, 0.3}) == doctest::Approx(0.045).epsilon(1e-14));
  CHECK(energy(make_lienard(0.5, 5.0), {0.0, 0.0}) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("potential has F' = a(1-a) w (w^(p-1) - 1) and F(1) = 0") {
  for (double p : {-4.0, -1.0, -0.5, 0.0, 2.0, 5.0}) {
    const LienardSystem s = make_lienard(0.3, p);
    CHECK(potential(s, 1.0) == doctest::Approx(0.0));
    for (double w : {0.2, 0.9, 1.7, 3.0}) {
      const double h = 1e-5 * w;
      const double fd = (potential(s, w + h) - potential(s, w - h)) / (2 * h);
      CHECK(fd == doctest::Approx(s.stiffness * w * (std::pow(w, p - 1.0) - 1.0)).epsilon(1e-8));
    }
  }
}

TEST_CASE("p = -1 uses the log potential, continuous in p") {
  const LienardSystem s = make_lienard(0.4, -1.0);
  for (double w : {0.1, 0.5, 2.0, 7.0}) {
    CHECK(potential(s, w) == doctest::Approx(s.stiffness * (std::log(w) - 0.5 * w * w + 0.5)));
    const double near = potential(make_lienard(0.4, -1.0 + 1e-7), w);
    CHECK(near == doctest::Approx(potential(s, w)).epsilon(1e-5));
  }
  CHECK(code_of([&] { potential(s, 0.0); }) == ErrorCode::PotentialSingularity);
  CHECK(code_of([] { potential(make_lienard(0.4, -3.0), 0.0); }) == ErrorCode::PotentialSingularity);
  CHECK(std::isfinite(potential(make_lienard(0.4, -0.5), 0.0)));
}

TEST_CASE("linearize examples") {
  const RootPair origin = linearize(make_lienard(0.3, 2.0), Equilibrium::Origin);
  REQUIRE(std::holds_alternative<RealPair>(origin));
  CHECK(std::get<RealPair>(origin).mu_plus == doctest::Approx(0.7));
  CHECK(std::get<RealPair>(origin).mu_minus == doctest::Approx(-0.3));

  const RootPair one = linearize(make_lienard(0.6, -4.0), Equilibrium::One);
  REQUIRE(std::holds_alternative<RealPair>(one));
  CHECK(std::get<RealPair>(one).mu_plus == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::get<RealPair>(one).mu_minus == doctest::Approx(-1.2).epsilon(1e-14));

  const RootPair focus = linearize(make_lienard(2.0 / 3.0, 4.0), Equilibrium::One);
  REQUIRE(std::holds_alternative<ComplexPair>(focus));
  CHECK(std::get<ComplexPair>(focus).real_part == doctest::Approx(-1.0 / 6.0));
  CHECK(std::get<ComplexPair>(focus).imag_part == doctest::Approx(std::sqrt(23.0) / 6.0));
}

TEST_CASE("property: origin eigenvalues obey Vieta for random a") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    double a = U(rng);
    if (a == 0.0) a = 0.5;
    const LienardSystem s = make_lienard(a, 3.0);
    const auto r = std::get<RealPair>(linearize(s, Equilibrium::Origin));
    CHECK(std::abs(r.mu_plus + r.mu_minus + (2 * a - 1)) < 1e-15);
    CHECK(std::abs(r.mu_plus * r.mu_minus + a * (1 - a)) < 1e-15);
    // the same roots solve the characteristic equation of the origin directly
    for (double mu : {r.mu_plus, r.mu_minus}) CHECK(std::abs(mu * mu + (2 * a - 1) * mu - a * (1 - a)) < 1e-15);
  }
}

TEST_CASE("integrate_orbit: equilibrium start stays put") {
  const Trajectory t = integrate_orbit(make_lienard(0.6, -4.0), {1.0, 0.0}, 0.0, 10.0, 1e-10);
  for (const auto& s : t.samples()) CHECK(s.y == State{1.0, 0.0});
  const OrbitClass c = classify_orbit(make_lienard(0.6, -4.0), t);
  CHECK(std::holds_alternative<ConvergentToOne>(c));
}

TEST_CASE("heteroclinic orbit from the origin to one (a = 2/3, p = 4)") {
  const LienardSystem s = make_lienard(2.0 / 3.0, 4.0);
  const ManifoldLaunch L = unstable_manifold_launch(s, Equilibrium::Origin, 1e-6);
  CHECK(L.state[0] == doctest::Approx(1e-6));
  CHECK(L.state[1] == doctest::Approx(1e-6 / 3.0));
  const Trajectory t = integrate_orbit(s, L.state, L.z0, 80.0, 1e-10);
  REQUIRE(std::holds_alternative<ConvergedToEquilibrium>(t.termination()));
  CHECK(std::get<ConvergedToEquilibrium>(t.termination()).label == "one");
  const OrbitClass c = classify_orbit(s, t);
  REQUIRE(std::holds_alternative<Heteroclinic>(c));
  CHECK(std::get<Heteroclinic>(c).from == Equilibrium::Origin);
  CHECK(std::get<Heteroclinic>(c).to == Equilibrium::One);
  // energy descends from E(0,0) = 1/15
  CHECK(energy(s, t.front().y) == doctest::Approx(1.0 / 15.0).epsilon(1e-5));
  CHECK(energy(s, t.back().y) < 1e-11);

  const ManifoldOrbit m = manifold_orbit(s, Equilibrium::Origin, 1, 80.0, 1e-10);
  CHECK(std::holds_alternative<Heteroclinic>(m.orbit));
  CHECK(code_of([&] { unstable_manifold_launch(s, Equilibrium::One, 1e-6); }) == ErrorCode::PreconditionUnmet);
}

TEST_CASE("homoclinic loop at a = 1/2, p = 5") {
  const LienardSystem s = make_lienard(0.5, 5.0);
  const State start{std::pow(3.0, 0.25), 0.0};
  CHECK(energy(s, start) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  const Trajectory fwd = integrate_orbit(s, start, 0.0, 40.0, 1e-13);
  const Trajectory bwd = integrate_orbit(s, start, 0.0, -40.0, 1e-13);
  for (const Trajectory* t : {&fwd, &bwd}) {
    double vmin = 1.0;
    for (const auto& x : t->samples()) vmin = std::min(vmin, x.y[0]);
    CHECK(vmin < 1e-3);
  }
  const OrbitClass c = classify_orbit(s, fwd, &bwd);
  INFO(describe(c));
  CHECK(std::holds_alternative<Homoclinic>(c));
}

TEST_CASE("periodic orbit inside the loop") {
  const LienardSystem s = make_lienard(0.5, 5.0);
  // F(V*) = 1/24 gives V*^2 = 2 cos(40 degrees)
  const double Vs = std::sqrt(2.0 * std::cos(40.0 * std::numbers::pi / 180.0));
  CHECK(energy(s, {Vs, 0.0}) == doctest::Approx(1.0 / 24.0).epsilon(1e-13));
  const Trajectory t = integrate_orbit(s, {Vs, 0.0}, 0.0, 40.0, 1e-10);
  const OrbitClass c = classify_orbit(s, t);
  REQUIRE(std::holds_alternative<Periodic>(c));
  CHECK(std::get<Periodic>(c).period > 0.0);
  CHECK(std::get<Periodic>(c).closure <= 1e-6);
  // period of the linearisation at (1, 0) is 2 pi / 2 for small rings; larger rings are slower
  CHECK(std::get<Periodic>(c).period > std::numbers::pi);
}

TEST_CASE("sign change and escape") {
  const LienardSystem s = make_lienard(0.5, 5.0);
  const Trajectory t = integrate_orbit(s, {1.5, -1.0}, 0.0, 40.0, 1e-10);
  const OrbitClass c = classify_orbit(s, t);
  REQUIRE(std::holds_alternative<SignChanging>(c));
  CHECK(std::abs(t.value_at(std::get<SignChanging>(c).first_zero)[0]) < 1e-8);

  const LienardSystem neg = make_lienard(0.6, -4.0);
  const OrbitClass d = classify_orbit(neg, integrate_orbit(neg, {0.5, -0.2}, 0.0, 40.0, 1e-10));
  CHECK(std::holds_alternative<SignChanging>(d));

  const Trajectory short_span = integrate_orbit(s, {1.2, 0.0}, 0.0, 0.5, 1e-10);
  CHECK(code_of([&] { classify_orbit(s, short_span); }) == ErrorCode::Inconclusive);
}

TEST_CASE("property: energy law dE/dz = -(2a-1) Vdot^2") {
  const double tol = 1e-10;
  for (auto [a, p, V0, Vd0] : {std::tuple{0.7, 3.0, 1.4, 0.0}, {0.35, 3.0, 1.1, 0.05}, {0.6, -4.0, 1.3, 0.1},
                               {0.8, 2.0, 0.7, -0.1}}) {
    const LienardSystem s = make_lienard(a, p);
    const Trajectory t = integrate_orbit(s, {V0, Vd0}, 0.0, 8.0, tol);
    const double dE = energy(s, t.back().y) - energy(s, t.front().y);
    INFO("a=" << a << " p=" << p << " dE=" << dE);
    CHECK(std::abs(dE - dissipation(s, t, 400000)) <= 10 * tol);
  }
}

TEST_CASE("property: conservative case keeps energy") {
  const LienardSystem s = make_lienard(0.5, 5.0);
  for (double V0 : {0.8, 1.2, 1.5}) {
    const Trajectory t = integrate_orbit(s, {V0, 0.0}, 0.0, 40.0, 1e-10);
    const double E0 = energy(s, t.front().y);
    double drift = 0.0;
    for (const auto& x : t.samples()) drift = std::max(drift, std::abs(energy(s, x.y) - E0));
    CHECK(drift < 1e-8);
  }
}

TEST_CASE("property: dissipative case never gains energy") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> Ua(0.51, 0.95), UV(0.3, 2.0), Ud(-0.3, 0.3);
  for (int k = 0; k < 20; ++k) {
    const LienardSystem s = make_lienard(Ua(rng), 3.0);
    const Trajectory t = integrate_orbit(s, {UV(rng), Ud(rng)}, 0.0, 20.0, 1e-10);
    for (std::size_t i = 1; i < t.size(); ++i) {
      CHECK(energy(s, t.samples()[i].y) - energy(s, t.samples()[i - 1].y) <= 1e-10);
    }
  }
}

TEST_CASE("property: z -> -z maps sys(a) onto sys(1-a) with Vdot negated") {
  for (double a : {0.3, 0.6, 0.75}) {
    const LienardSystem s = make_lienard(a, 3.0), r = make_lienard(1.0 - a, 3.0);
    const Trajectory back = integrate_orbit(s, {1.3, 0.2}, 0.0, -6.0, 1e-13);
    const Trajectory fwd = integrate_orbit(r, {1.3, -0.2}, 0.0, 6.0, 1e-13);
    const double span = std::min(-back.t_end(), fwd.t_end());
    for (int i = 0; i <= 60; ++i) {
      const double z = span * i / 60.0;
      const State u = back.value_at(-z), v = fwd.value_at(z);
      CHECK(std::abs(u[0] - v[0]) < 1e-9);
      CHECK(std::abs(u[1] + v[1]) < 1e-9);
    }
  }
}

TEST_CASE("portrait regimes") {
  SUBCASE("a = 1/2, p = 5: ring of periodic orbits inside a homoclinic loop") {
    const LienardSystem s = make_lienard(0.5, 5.0);
    // the loop closes within the 1e-6 radius only when the energy drift stays below ~1e-13
    const Portrait p = portrait(s, default_seeds(s), 40.0, 1e-13);
    CHECK(p.discriminant_sign == "negative");
    CHECK(p.regime == "F1");
    CHECK(count_kind(p, 2) >= 1);  // Periodic
    CHECK(count_kind(p, 1) >= 1);  // Homoclinic
    CHECK(count_kind(p, 0) == 0);
  }
  SUBCASE("a = 2/3, p = 4: spiral sink at one") {
    const LienardSystem s = make_lienard(2.0 / 3.0, 4.0);
    // the focus contracts like exp(-z/6), so reaching the 1e-6 radius takes z ~ 85
    const Portrait p = portrait(s, default_seeds(s), 100.0, 1e-10);
    CHECK(p.discriminant_sign == "negative");
    CHECK(p.regime == "F3");
    CHECK(p.p_vs_threshold == "above");
    CHECK(count_kind(p, 2) == 0);
    CHECK(count_kind(p, 1) == 0);
    CHECK(count_kind(p, 0) >= 1);  // the manifold orbit from the origin
    CHECK(count_kind(p, 5) >= 1);
  }
  SUBCASE("a = 2/3, p = 9/8: boundary") {
    const LienardSystem s = make_lienard(2.0 / 3.0, 9.0 / 8.0);
    const Portrait p = portrait(s, {}, 10.0, 1e-10);
    CHECK(p.discriminant_sign == "zero");
    CHECK(p.p_vs_threshold == "equal");
    CHECK(p.p_threshold == doctest::Approx(9.0 / 8.0));
  }
  SUBCASE("seed failures are recorded") {
    const LienardSystem s = make_lienard(0.6, -4.0);
    const Portrait p = portrait(s, {{0.0, 0.0}, {1.2, 0.0}}, 20.0, 1e-10);
    REQUIRE(p.entries.size() == 2);
    CHECK_FALSE(p.entries[0].error.empty());
  }
}
