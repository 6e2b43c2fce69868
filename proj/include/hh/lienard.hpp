#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hh/numerics.hpp"
#include "hh/trajectory.hpp"

namespace hh {

/// V'' + (2a-1) V' + a(1-a)(V^p - V) = 0 in z = log x.
struct LienardSystem {
  double a;
  double p;
  double damping;    // 2a - 1
  double stiffness;  // a(1 - a)
};

/// InvalidArgument unless a lies in (0, 1) and p is finite.
LienardSystem make_lienard(double a, double p);
/// a = (2+sigma)/(1-p); the power law must be a positive solution.
LienardSystem lienard_from_params(double p, double sigma);

enum class Equilibrium { Origin, One };
std::string to_string(Equilibrium eq);

/// (V', V''). UndefinedPower when V <= 0 with p < 0, or V < 0 with a
/// non-integer p.
State vector_field(const LienardSystem& sys, const State& state);

/// F(w) = integral from 1 to w of a(1-a) v (v^(p-1) - 1) dv. For p = -1 the
/// log form a(1-a)(log w - w^2/2 + 1/2). PotentialSingularity when w <= 0
/// and p <= -1 (F is infinite there).
double potential(const LienardSystem& sys, double w);
double energy(const LienardSystem& sys, const State& state);

RootPair linearize(const LienardSystem& sys, Equilibrium at);

struct OrbitOptions {
  double equilibrium_radius = 1e-6;
  int consecutive = 5;
  double escape_threshold = 1e8;
  double max_step = 0.0;
};

/// Integrates the system over z_span = (z0, z1), either direction. Stops
/// when V reaches 0 (reported as ZeroCrossing, including the singular zeros
/// of p < 0 where V' diverges), on escape, or on convergence to an
/// equilibrium ("origin" for p > 0, "one").
Trajectory integrate_orbit(const LienardSystem& sys, const State& initial, double z0, double z1, double tol,
                           const OrbitOptions& options = {});

struct Heteroclinic {
  Equilibrium from;
  Equilibrium to;
};
struct Homoclinic {
  Equilibrium at;
};
struct Periodic {
  double period;
  double closure;  // phase-space distance of the Poincare return
};
struct SignChanging {
  double first_zero;
};
struct Unbounded {};
struct ConvergentToOne {};

using OrbitClass = std::variant<Heteroclinic, Homoclinic, Periodic, SignChanging, Unbounded, ConvergentToOne>;

std::string describe(const OrbitClass& orbit);

struct ClassifyOptions {
  /// A start this close to an equilibrium counts as a launch from it.
  double launch_radius = 1e-5;
  /// Poincare closure tolerance in phase space.
  double closure = 1e-6;
};

/// Classifies a forward orbit. The alpha-limit comes from `backward` when
/// given (an orbit integrated from the same start with decreasing z),
/// otherwise from the start's distance to an equilibrium. Throws
/// Inconclusive when the span is too short to decide.
OrbitClass classify_orbit(const LienardSystem& sys, const Trajectory& forward,
                          const Trajectory* backward = nullptr, const ClassifyOptions& options = {});

/// Crossings of the Poincare section V' = 0 (V' going from + to -) with V > 1.
std::vector<double> poincare_returns(const Trajectory& orbit);

/// Start on the one-dimensional unstable manifold of an equilibrium:
/// eq + eps * (1, mu_plus), together with the z at which to launch so the
/// linear growth reaches unit size near z = 0 (z0 = log(eps) / mu_plus).
struct ManifoldLaunch {
  State state;
  double z0;
};
ManifoldLaunch unstable_manifold_launch(const LienardSystem& sys, Equilibrium at, double eps, int side = 1);

/// Orbit launched on the unstable manifold of `at` and integrated to z_end.
/// The launch is repeated at eps/2 and both orbits are classified; a class
/// that changes with eps throws Inconclusive.
struct ManifoldOrbit {
  Trajectory forward;
  OrbitClass orbit;
  double z0;
};
ManifoldOrbit manifold_orbit(const LienardSystem& sys, Equilibrium at, int side, double z_end, double tol,
                             double eps = 1e-6);

/// (2a-1)^2 - 4a(1-a)(p-1).
double discriminant(const LienardSystem& sys);

struct PortraitEntry {
  State seed;
  std::optional<Trajectory> forward;
  std::optional<Trajectory> backward;
  std::optional<OrbitClass> orbit;
  std::string error;  // non-empty when the seed failed
};

struct Portrait {
  LienardSystem sys;
  double discriminant;
  std::string discriminant_sign;  // "negative", "zero" or "positive"
  double p_threshold;             // (4a(1-a))^-1
  std::string p_vs_threshold;     // "above", "equal" or "below"
  std::string regime;             // F1..F5
  std::vector<PortraitEntry> entries;
};

/// Deterministic seed grid: every (V, V') with V in {0.25, 0.5, ..., 2} and
/// V' in {-0.5, 0, 0.5}, plus the unstable-manifold launches of the origin
/// (p > 0) and of (1, 0) when it is a saddle.
std::vector<State> default_seeds(const LienardSystem& sys);

/// Integrates every seed forward and backward over [-z_span, z_span] and
/// classifies it. Per-seed failures are recorded, not thrown.
Portrait portrait(const LienardSystem& sys, const std::vector<State>& seeds, double z_span, double tol);

}  // namespace hh
