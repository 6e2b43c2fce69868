#include "hh/lienard.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "hh/closed_forms.hpp"
#include "hh/error.hpp"

namespace hh {

namespace {

constexpr double kSingularLevel = 1e-3;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_integer(double v) { return v == std::trunc(v); }

State point_of(Equilibrium eq) { return eq == Equilibrium::Origin ? State{0.0, 0.0} : State{1.0, 0.0}; }

double distance(const State& a, const State& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

std::optional<Equilibrium> parse_label(const std::string& label) {
  if (label == "origin") return Equilibrium::Origin;
  if (label == "one") return Equilibrium::One;
  return std::nullopt;
}

std::optional<Equilibrium> converged_to(const Trajectory& t) {
  if (const auto* c = std::get_if<ConvergedToEquilibrium>(&t.termination())) return parse_label(c->label);
  return std::nullopt;
}

bool origin_is_equilibrium(const LienardSystem& sys) { return sys.p > 0.0; }

}  // namespace

LienardSystem make_lienard(double a, double p) {
  if (!(a > 0.0 && a < 1.0)) throw Error(ErrorCode::InvalidArgument, "lienard: a must lie in (0, 1)");
  if (!std::isfinite(p)) throw Error(ErrorCode::InvalidArgument, "lienard: p must be finite");
  return {a, p, 2.0 * a - 1.0, a * (1.0 - a)};
}

LienardSystem lienard_from_params(double p, double sigma) {
  const PowerLaw ua = power_law(p, sigma);
  return make_lienard(ua.a, p);
}

std::string to_string(Equilibrium eq) { return eq == Equilibrium::Origin ? "origin" : "one"; }

State vector_field(const LienardSystem& sys, const State& state) {
  const double V = state[0];
  if ((V <= 0.0 && sys.p < 0.0) || (V < 0.0 && !is_integer(sys.p))) {
    throw Error(ErrorCode::UndefinedPower, "vector_field: V^p undefined at this state");
  }
  const double Vp = V == 0.0 ? (sys.p == 0.0 ? 1.0 : 0.0) : std::pow(V, sys.p);
  return {state[1], -sys.damping * state[1] - sys.stiffness * (Vp - V)};
}

double potential(const LienardSystem& sys, double w) {
  if (w < 0.0 && !is_integer(sys.p)) throw Error(ErrorCode::UndefinedPower, "potential: w^p undefined for w < 0");
  if (w <= 0.0 && sys.p <= -1.0) throw Error(ErrorCode::PotentialSingularity, "potential: F is infinite at w <= 0");
  if (sys.p == -1.0) return sys.stiffness * (std::log(w) - 0.5 * w * w + 0.5);
  const double q = sys.p + 1.0;
  return sys.stiffness / (2.0 * q) * (2.0 * std::pow(w, q) - q * w * w + sys.p - 1.0);
}

double energy(const LienardSystem& sys, const State& state) {
  return 0.5 * state[1] * state[1] + potential(sys, state[0]);
}

RootPair linearize(const LienardSystem& sys, Equilibrium at) {
  if (at == Equilibrium::Origin) return RealPair{1.0 - sys.a, -sys.a};
  return quadratic_roots(sys.damping, sys.stiffness * (sys.p - 1.0));
}

Trajectory integrate_orbit(const LienardSystem& sys, const State& initial, double z0, double z1, double tol,
                           const OrbitOptions& options) {
  if (!std::isfinite(initial[0]) || !std::isfinite(initial[1])) {
    throw Error(ErrorCode::InvalidArgument, "integrate_orbit: non-finite initial state");
  }
  vector_field(sys, initial);  // precondition check

  const VectorField field = [sys](double, const State& y) -> State {
    return {y[1], -sys.damping * y[1] - sys.stiffness * (continued_power(y[0], sys.p) - y[0])};
  };
  EventSpec events;
  events.zero_function = [](double, const State& y) { return y[0]; };
  events.escape_threshold = options.escape_threshold;
  if (origin_is_equilibrium(sys)) {
    events.equilibria.push_back({"origin", {0.0, 0.0}, options.equilibrium_radius, options.consecutive, true});
  }
  // the distance to a focus oscillates, so only the radius is required there
  events.equilibria.push_back({"one", {1.0, 0.0}, options.equilibrium_radius, options.consecutive, false});
  IntegratorOptions io;
  io.max_step = options.max_step;
  return integrate_to_zero(field, initial, z0, z1, tol, events, io, kSingularLevel);
}

std::string describe(const OrbitClass& orbit) {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&](const Heteroclinic& o) { out << "Heteroclinic(" << to_string(o.from) << "->" << to_string(o.to) << ")"; },
                 [&](const Homoclinic& o) { out << "Homoclinic(" << to_string(o.at) << ")"; },
                 [&](const Periodic& o) { out << "Periodic(" << o.period << ")"; },
                 [&](const SignChanging& o) { out << "SignChanging(" << o.first_zero << ")"; },
                 [&](const Unbounded&) { out << "Unbounded"; },
                 [&](const ConvergentToOne&) { out << "ConvergentToOne"; },
             },
             orbit);
  return out.str();
}

std::vector<double> poincare_returns(const Trajectory& orbit) {
  std::vector<double> out;
  const auto samples = orbit.samples();
  const auto segments = orbit.segments();
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    if (!(samples[i].y[1] > 0.0 && samples[i + 1].y[1] <= 0.0)) continue;
    double lo = samples[i].t, hi = samples[i + 1].t;
    if (samples[i + 1].y[1] < 0.0) {
      for (int k = 0; k < 80; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (evaluate_segment(segments[i], mid)[1] > 0.0 ? lo : hi) = mid;
      }
    }
    const double z = samples[i + 1].y[1] == 0.0 ? hi : 0.5 * (lo + hi);
    if (orbit.value_at(z)[0] > 1.0) out.push_back(z);
  }
  return out;
}

OrbitClass classify_orbit(const LienardSystem& sys, const Trajectory& forward, const Trajectory* backward,
                          const ClassifyOptions& options) {
  if (forward.empty()) throw Error(ErrorCode::InvalidArgument, "classify_orbit: empty trajectory");
  const Event& term = forward.termination();
  if (const auto* zc = std::get_if<ZeroCrossing>(&term)) return SignChanging{zc->location};
  if (std::holds_alternative<Escape>(term)) return Unbounded{};

  const State start = forward.front().y;
  std::optional<Equilibrium> alpha;
  if (backward) alpha = converged_to(*backward);
  if (!alpha) {
    if (origin_is_equilibrium(sys) && distance(start, point_of(Equilibrium::Origin)) <= options.launch_radius) {
      alpha = Equilibrium::Origin;
    } else if (distance(start, point_of(Equilibrium::One)) <= options.launch_radius) {
      alpha = Equilibrium::One;
    }
  }

  if (const auto omega = converged_to(forward)) {
    if (alpha && *alpha != *omega) return Heteroclinic{*alpha, *omega};
    if (*omega == Equilibrium::One) {
      double excursion = 0.0;
      for (const auto& s : forward.samples()) excursion = std::max(excursion, distance(s.y, point_of(Equilibrium::One)));
      if (!alpha || excursion <= options.launch_radius) return ConvergentToOne{};
      return Homoclinic{Equilibrium::One};
    }
    if (alpha) return Homoclinic{*omega};
    throw Error(ErrorCode::Inconclusive, "classify_orbit: converges to the origin but the alpha-limit is unknown");
  }

  // span end: look for a Poincare return
  const auto returns = poincare_returns(forward);
  const bool on_section = start[1] == 0.0 && start[0] > 1.0;
  if (on_section && !returns.empty()) {
    const State back = forward.value_at(returns[0]);
    const double closure = distance(back, start);
    if (closure <= options.closure) return Periodic{std::abs(returns[0] - forward.t_begin()), closure};
  } else if (returns.size() >= 2) {
    const State r0 = forward.value_at(returns[0]);
    const State r1 = forward.value_at(returns[1]);
    const double closure = distance(r0, r1);
    if (closure <= options.closure) return Periodic{std::abs(returns[1] - returns[0]), closure};
  }
  throw Error(ErrorCode::Inconclusive, "classify_orbit: span too short to classify; extend z_span");
}

ManifoldLaunch unstable_manifold_launch(const LienardSystem& sys, Equilibrium at, double eps, int side) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "unstable_manifold_launch: eps must be > 0");
  const RootPair roots = linearize(sys, at);
  const auto* real = std::get_if<RealPair>(&roots);
  if (!real || !(real->mu_plus > 0.0)) {
    throw Error(ErrorCode::PreconditionUnmet, "unstable_manifold_launch: equilibrium has no real unstable direction");
  }
  const double mu = real->mu_plus;
  const double sgn = side >= 0 ? 1.0 : -1.0;
  const State base = point_of(at);
  return {{base[0] + sgn * eps, base[1] + sgn * eps * mu}, std::log(eps) / mu};
}

namespace {

bool same_class(const OrbitClass& x, const OrbitClass& y) {
  if (x.index() != y.index()) return false;
  if (const auto* h = std::get_if<Heteroclinic>(&x)) {
    const auto& k = std::get<Heteroclinic>(y);
    return h->from == k.from && h->to == k.to;
  }
  if (const auto* h = std::get_if<Homoclinic>(&x)) return h->at == std::get<Homoclinic>(y).at;
  return true;
}

struct SeedLaunch {
  Equilibrium at;
  int side;
  double eps;
};

// seeds placed on an unstable eigendirection are run from their launch point
std::optional<SeedLaunch> manifold_seed(const LienardSystem& sys, const State& seed) {
  for (Equilibrium at : {Equilibrium::Origin, Equilibrium::One}) {
    if (at == Equilibrium::Origin && !origin_is_equilibrium(sys)) continue;
    const State base = point_of(at);
    const double dv = seed[0] - base[0];
    if (dv == 0.0 || distance(seed, base) > 1e-5) continue;
    const RootPair roots = linearize(sys, at);
    const auto* r = std::get_if<RealPair>(&roots);
    if (!r || !(r->mu_plus > 0.0)) continue;
    if (std::abs(seed[1] - dv * r->mu_plus) > 1e-9 * std::abs(dv)) continue;
    return SeedLaunch{at, dv > 0.0 ? 1 : -1, std::abs(dv)};
  }
  return std::nullopt;
}

}  // namespace

ManifoldOrbit manifold_orbit(const LienardSystem& sys, Equilibrium at, int side, double z_end, double tol,
                             double eps) {
  const ManifoldLaunch full = unstable_manifold_launch(sys, at, eps, side);
  const ManifoldLaunch half = unstable_manifold_launch(sys, at, 0.5 * eps, side);
  if (!(z_end > full.z0)) throw Error(ErrorCode::InvalidArgument, "manifold_orbit: z_end must exceed the launch point");
  Trajectory forward = integrate_orbit(sys, full.state, full.z0, z_end, tol);
  const OrbitClass orbit = classify_orbit(sys, forward);
  const double shift = half.z0 - full.z0;
  const OrbitClass check = classify_orbit(sys, integrate_orbit(sys, half.state, half.z0, z_end + shift, tol));
  if (!same_class(orbit, check)) {
    throw Error(ErrorCode::Inconclusive, "manifold_orbit: class changes between eps and eps/2 (" + describe(orbit) +
                                             " vs " + describe(check) + ")");
  }
  return {std::move(forward), orbit, full.z0};
}

double discriminant(const LienardSystem& sys) {
  return sys.damping * sys.damping - 4.0 * sys.stiffness * (sys.p - 1.0);
}

std::vector<State> default_seeds(const LienardSystem& sys) {
  std::vector<State> seeds;
  for (int i = 1; i <= 8; ++i) {
    for (double Vdot : {-0.5, 0.0, 0.5}) seeds.push_back({0.25 * i, Vdot});
  }
  if (origin_is_equilibrium(sys)) seeds.push_back(unstable_manifold_launch(sys, Equilibrium::Origin, 1e-6).state);
  const RootPair one = linearize(sys, Equilibrium::One);
  if (const auto* r = std::get_if<RealPair>(&one); r && r->mu_plus > 0.0 && r->mu_minus < 0.0) {
    seeds.push_back(unstable_manifold_launch(sys, Equilibrium::One, 1e-6, 1).state);
    seeds.push_back(unstable_manifold_launch(sys, Equilibrium::One, 1e-6, -1).state);
  }
  return seeds;
}

Portrait portrait(const LienardSystem& sys, const std::vector<State>& seeds, double z_span, double tol) {
  if (!(z_span > 0.0)) throw Error(ErrorCode::InvalidArgument, "portrait: z_span must be > 0");
  Portrait out;
  out.sys = sys;
  out.discriminant = discriminant(sys);
  const double scale = sys.damping * sys.damping + std::abs(4.0 * sys.stiffness * (sys.p - 1.0));
  const bool zero = std::abs(out.discriminant) <= 64.0 * std::numeric_limits<double>::epsilon() * scale;
  out.discriminant_sign = zero ? "zero" : (out.discriminant < 0.0 ? "negative" : "positive");
  out.p_threshold = 1.0 / (4.0 * sys.stiffness);
  out.p_vs_threshold = zero ? "equal" : (sys.p > out.p_threshold ? "above" : "below");
  if (out.discriminant_sign == "negative") {
    out.regime = sys.a == 0.5 ? "F1" : (sys.a < 0.5 ? "F2" : "F3");
  } else {
    out.regime = sys.a < 0.5 ? "F4" : "F5";
  }

  for (const State& seed : seeds) {
    PortraitEntry entry;
    entry.seed = seed;
    try {
      if (const auto launch = manifold_seed(sys, seed)) {
        ManifoldOrbit m = manifold_orbit(sys, launch->at, launch->side, z_span, tol, launch->eps);
        entry.orbit = m.orbit;
        entry.forward = std::move(m.forward);
        out.entries.push_back(std::move(entry));
        continue;
      }
      entry.forward = integrate_orbit(sys, seed, 0.0, z_span, tol);
      entry.backward = integrate_orbit(sys, seed, 0.0, -z_span, tol);
      entry.orbit = classify_orbit(sys, *entry.forward, &*entry.backward);
    } catch (const Error& e) {
      entry.error = std::string(to_string(e.code())) + ": " + e.what();
    }
    out.entries.push_back(std::move(entry));
  }
  return out;
}

}  // namespace hh
