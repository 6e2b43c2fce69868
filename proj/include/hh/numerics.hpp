#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "hh/error.hpp"
#include "hh/trajectory.hpp"

namespace hh {

using VectorField = std::function<State(double t, const State& y)>;
using ScalarEventFunction = std::function<double(double t, const State& y)>;

/// An equilibrium the integrator should watch for. Convergence is declared
/// once the state has stayed within `radius` for `consecutive` accepted
/// steps, each one no farther out than the previous when `require_inward`.
struct EquilibriumTarget {
  std::string label;
  State point{};
  double radius = 1e-6;
  int consecutive = 5;
  bool require_inward = true;
};

struct EventSpec {
  /// Terminal event at a sign change of this function; empty disables it.
  ScalarEventFunction zero_function;
  /// Max-norm of the state above which integration stops with Escape.
  double escape_threshold = 1e8;
  std::vector<EquilibriumTarget> equilibria;
};

struct IntegratorOptions {
  double max_step = 0.0;  // 0: whole span
  double initial_step = 0.0;  // 0: automatic
  long max_steps = 2'000'000;
};

/// Raised on StepSizeUnderflow / StepLimitExceeded; carries what was
/// integrated before the failure.
class IntegrationError : public Error {
 public:
  IntegrationError(ErrorCode code, const std::string& message, Trajectory partial)
      : Error(code, message), partial_(std::move(partial)) {}

  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

/// Adaptive Dormand-Prince 5(4) integration of y' = field(t, y) from t0 to t1
/// (either direction) with event detection. The local error estimate of
/// every accepted step is below `tol` in the mixed norm
/// |err_i| / (tol (1 + max(|y_i|, |y_new_i|))). Event locations are refined
/// by bisection on the dense output.
Trajectory integrate_ivp(const VectorField& field, const State& y0, double t0, double t1,
                         double tol, const EventSpec& events = {},
                         const IntegratorOptions& options = {});

/// Re-terminates the partial trajectory of an underflowed integration as a
/// ZeroCrossing at its last abscissa when |zero_function| has collapsed below
/// `level` times the largest |y0| seen along the way. That is how a zero of
/// a field with a negative power shows up (the derivative diverges as the zero is approached). Rethrows otherwise.
Trajectory close_at_singular_zero(const IntegrationError& error,
                                  const ScalarEventFunction& zero_function, double level);

/// Same idea for a trajectory that stopped on Escape: when the first state
/// component has collapsed to |y0| <= level * max|y0| while the escape was driven by
/// the second, the stop is re-labelled as a ZeroCrossing at that abscissa.
Trajectory settle_singular_zero(const Trajectory& trajectory, double level);

/// Runs integrate_ivp, converting both signatures of a singular zero of the
/// first component (underflow with y0 -> 0, or escape of y1 while y0 -> 0)
/// into a ZeroCrossing.
Trajectory integrate_to_zero(const VectorField& field, const State& y0, double t0, double t1, double tol,
                             const EventSpec& events, const IntegratorOptions& options, double level);

struct RealPair {
  double mu_plus;
  double mu_minus;
};

struct ComplexPair {
  double real_part;
  double imag_part;  // > 0
};

using RootPair = std::variant<RealPair, ComplexPair>;

/// Roots of mu^2 + b mu + c = 0, cancellation-free for large |b|.
RootPair quadratic_roots(double b, double c);

/// Function sampled on a uniform grid.
template <class Value>
struct GridFunction {
  std::vector<double> x;
  std::vector<Value> values;
};

template <class Value>
struct FixedPointResult {
  GridFunction<Value> solution;
  int iterations = 0;
  double last_update = 0.0;
  std::vector<double> updates;  // sup-norm update of every iteration
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const State& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

inline double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double sup_distance(const std::vector<State>& a, const std::vector<State>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max({d, std::abs(a[i][0] - b[i][0]), std::abs(a[i][1] - b[i][1])});
  }
  return d;
}

}  // namespace detail

struct FixedPointOptions {
  double tol = 1e-12;
  int max_iter = 500;
  /// Abort early (NoConvergence) once two consecutive update ratios exceed
  /// this bound; values >= 1 only stop on divergence to non-finite values.
  double max_contraction = 1.0;
};

/// Picard iteration psi_{k+1} = map(psi_k). Returns the first iterate whose
/// sup-norm update falls below `tol`.
template <class Value, class Map>
FixedPointResult<Value> fixed_point_solve(Map&& map, const GridFunction<Value>& initial,
                                          const FixedPointOptions& options = {}) {
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "fixed_point_solve: tol must be positive");
  if (initial.x.size() != initial.values.size()) {
    throw Error(ErrorCode::InvalidArgument, "fixed_point_solve: grid and values differ in length");
  }

  FixedPointResult<Value> result;
  result.solution = initial;
  int ratio_violations = 0;
  for (int k = 1; k <= options.max_iter; ++k) {
    std::vector<Value> next = map(static_cast<const GridFunction<Value>&>(result.solution));
    if (next.size() != result.solution.values.size()) {
      throw Error(ErrorCode::InvalidArgument, "fixed_point_solve: map changed the grid size");
    }
    const double update = detail::sup_distance(next, result.solution.values);
    result.solution.values = std::move(next);
    result.iterations = k;
    result.last_update = update;
    result.updates.push_back(update);
    if (!std::isfinite(update)) {
      throw Error(ErrorCode::NoConvergence, "fixed_point_solve: iterate became non-finite");
    }
    if (update < options.tol) return result;
    if (options.max_contraction < 1.0 && result.updates.size() >= 3) {
      const double prev = result.updates[result.updates.size() - 2];
      ratio_violations = (prev > 0.0 && update / prev > options.max_contraction) ? ratio_violations + 1 : 0;
      if (ratio_violations >= 2) {
        throw Error(ErrorCode::NoConvergence, "fixed_point_solve: map is not contracting");
      }
    }
  }
  throw Error(ErrorCode::NoConvergence,
              "fixed_point_solve: no convergence after " + std::to_string(options.max_iter) + " iterations");
}

/// Sign changes of a sampled function together with their linearly
/// interpolated locations. Exact zeros count once.
struct ZeroCount {
  int count = 0;
  std::vector<double> locations;
};

ZeroCount zero_count(std::span<const double> x, std::span<const double> f);

/// v^p extended to v <= 0 wherever a real continuation exists (integer p,
/// odd extension for p > 0); NaN otherwise, so integrators reject the step.
double continued_power(double v, double p);

/// Uniform / logarithmic grids.
std::vector<double> linspace(double lo, double hi, std::size_t count);
std::vector<double> logspace(double lo, double hi, std::size_t count);

}  // namespace hh
