#include "hh/numerics.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace hh {

namespace {

// Dormand-Prince 5(4) tableau with Hairer's dense-output coefficients.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 5.0;
constexpr int kBisections = 60;

bool finite(const State& y) { return std::isfinite(y[0]) && std::isfinite(y[1]); }

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (const auto& [coef, k] : terms) {
    out[0] += h * coef * (*k)[0];
    out[1] += h * coef * (*k)[1];
  }
  return out;
}

double max_norm(const State& y) { return std::max(std::abs(y[0]), std::abs(y[1])); }

State safe_eval(const VectorField& field, double t, const State& y) {
  try {
    return field(t, y);
  } catch (const Error&) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
}

double initial_step(const VectorField& field, double t0, const State& y0, const State& f0, double tol, double dir,
                    double hmax) {
  double dnf = 0.0, dny = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double sk = tol * (1.0 + std::abs(y0[k]));
    dnf += (f0[k] / sk) * (f0[k] / sk);
    dny += (y0[k] / sk) * (y0[k] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, hmax);
  const State y1 = axpy(y0, dir * h, {{1.0, &f0}});
  const State f1 = safe_eval(field, t0 + dir * h, y1);
  if (!finite(f1)) return h;
  double der2 = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double sk = tol * (1.0 + std::abs(y0[k]));
    der2 += ((f1[k] - f0[k]) / sk) * ((f1[k] - f0[k]) / sk);
  }
  der2 = std::sqrt(der2) / h;
  const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
  return std::min({100.0 * h, h1, hmax});
}

// Bisection for the first root of phi on [lo, hi] (phi(lo) and phi(hi) of opposite sign).
template <class Phi>
double bisect(Phi&& phi, double lo, double hi, double phi_lo) {
  for (int i = 0; i < kBisections; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double pm = phi(mid);
    if (pm == 0.0) return mid;
    if ((pm > 0.0) == (phi_lo > 0.0)) {
      lo = mid;
      phi_lo = pm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double peak_value(const Trajectory& t) {
  double peak = 0.0;
  for (const auto& s : t.samples()) peak = std::max(peak, std::abs(s.y[0]));
  return peak;
}

}  // namespace

Trajectory integrate_ivp(const VectorField& field, const State& y0, double t0, double t1, double tol,
                         const EventSpec& events, const IntegratorOptions& options) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw Error(ErrorCode::InvalidArgument, "integrate_ivp: tol must be > 0");
  if (!std::isfinite(t0) || !std::isfinite(t1) || t0 == t1) {
    throw Error(ErrorCode::InvalidArgument, "integrate_ivp: span must be finite with t0 != t1");
  }
  if (!finite(y0)) throw Error(ErrorCode::InvalidArgument, "integrate_ivp: non-finite initial state");

  State k1 = field(t0, y0);
  if (!finite(k1)) throw Error(ErrorCode::NonFiniteField, "integrate_ivp: field is not finite at the initial state");

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  const double hmax = options.max_step > 0.0 ? std::min(options.max_step, span) : span;
  double habs = options.initial_step > 0.0 ? std::min(options.initial_step, hmax)
                                           : initial_step(field, t0, y0, k1, tol, dir, hmax);

  TrajectoryBuilder builder;
  builder.start(t0, y0, k1);

  double t = t0;
  State y = y0;
  double g_old = events.zero_function ? events.zero_function(t0, y0) : 0.0;
  std::vector<int> eq_count(events.equilibria.size(), 0);
  std::vector<double> eq_prev(events.equilibria.size(), std::numeric_limits<double>::infinity());
  bool last_rejected = false;
  long steps = 0;

  auto fail = [&](ErrorCode code, const std::string& what) -> IntegrationError {
    std::ostringstream msg;
    msg.precision(17);
    msg << "integrate_ivp: " << what << " at t=" << t;
    return IntegrationError(code, msg.str(), std::move(builder).finish(ReachedSpanEnd{}, tol));
  };

  while (true) {
    if (++steps > options.max_steps) throw fail(ErrorCode::StepLimitExceeded, "step limit exceeded");
    if (habs <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1e-300)) {
      throw fail(ErrorCode::StepSizeUnderflow, "step size underflow");
    }
    bool last = false;
    if (habs >= std::abs(t1 - t)) {
      habs = std::abs(t1 - t);
      last = true;
    }
    const double h = dir * habs;

    const State k2 = safe_eval(field, t + c2 * h, axpy(y, h, {{a21, &k1}}));
    const State k3 = safe_eval(field, t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const State k4 = safe_eval(field, t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = safe_eval(field, t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State ys = axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    const double tn = last ? t1 : t + h;
    const State k6 = safe_eval(field, tn, ys);
    const State yn = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    const State k7 = safe_eval(field, tn, yn);

    double err = 0.0;
    if (finite(k2) && finite(k3) && finite(k4) && finite(k5) && finite(k6) && finite(k7) && finite(yn)) {
      for (int k = 0; k < 2; ++k) {
        const double e = h * (e1 * k1[k] + e3 * k3[k] + e4 * k4[k] + e5 * k5[k] + e6 * k6[k] + e7 * k7[k]);
        const double sk = tol * (1.0 + std::max(std::abs(y[k]), std::abs(yn[k])));
        err += (e / sk) * (e / sk);
      }
      err = std::sqrt(err / 2.0);
    } else {
      err = std::numeric_limits<double>::infinity();
    }

    if (!(err <= 1.0)) {
      const double fac = std::isfinite(err) ? std::max(kFacMin, kSafety * std::pow(err, -0.2)) : kFacMin;
      habs *= std::min(fac, 1.0);
      last_rejected = true;
      continue;
    }

    Trajectory::Segment seg{t, h, {}};
    for (int k = 0; k < 2; ++k) {
      seg.r[0][k] = y[k];
      seg.r[1][k] = yn[k] - y[k];
      seg.r[2][k] = h * k1[k] - seg.r[1][k];
      seg.r[3][k] = seg.r[1][k] - h * k7[k] - seg.r[2][k];
      seg.r[4][k] = h * (d1 * k1[k] + d3 * k3[k] + d4 * k4[k] + d5 * k5[k] + d6 * k6[k] + d7 * k7[k]);
    }

    // terminal events inside (t, tn]
    std::optional<std::pair<double, Event>> hit;
    double g_new = 0.0;
    if (events.zero_function) {
      g_new = events.zero_function(tn, yn);
      if (g_old != 0.0 && (g_new == 0.0 || (g_new > 0.0) != (g_old > 0.0))) {
        double loc = tn;
        if (g_new != 0.0) {
          auto phi = [&](double s) { return events.zero_function(s, evaluate_segment(seg, s)); };
          loc = bisect(phi, t, tn, g_old);
        }
        hit = {loc, ZeroCrossing{loc}};
      }
    }
    if (max_norm(yn) > events.escape_threshold) {
      auto phi = [&](double s) { return max_norm(evaluate_segment(seg, s)) - events.escape_threshold; };
      const double loc = bisect(phi, t, tn, max_norm(y) - events.escape_threshold);
      if (!hit || dir * (loc - hit->first) < 0.0) hit = {loc, Escape{events.escape_threshold, loc}};
    }
    if (hit) {
      const double loc = hit->first;
      if (dir * (loc - t) > 0.0) {
        const State ye = loc == tn ? yn : evaluate_segment(seg, loc);
        State dye = safe_eval(field, loc, ye);
        if (!finite(dye)) dye = differentiate_segment(seg, loc);
        builder.push(loc, ye, dye, seg);
      }
      return std::move(builder).finish(hit->second, tol);
    }

    builder.push(tn, yn, k7, seg);
    t = tn;
    y = yn;
    k1 = k7;
    g_old = g_new;

    for (std::size_t i = 0; i < events.equilibria.size(); ++i) {
      const auto& target = events.equilibria[i];
      const double d = std::hypot(y[0] - target.point[0], y[1] - target.point[1]);
      const bool inward = !target.require_inward || d <= eq_prev[i];
      eq_count[i] = (d < target.radius && inward) ? eq_count[i] + 1 : 0;
      eq_prev[i] = d;
      if (eq_count[i] >= target.consecutive) {
        return std::move(builder).finish(ConvergedToEquilibrium{target.label, d}, tol);
      }
    }

    if (last) return std::move(builder).finish(ReachedSpanEnd{}, tol);

    double fac = err == 0.0 ? kFacMax : std::clamp(kSafety * std::pow(err, -0.2), kFacMin, kFacMax);
    if (last_rejected) fac = std::min(fac, 1.0);
    habs = std::min(habs * fac, hmax);
    last_rejected = false;
  }
}

Trajectory close_at_singular_zero(const IntegrationError& error, const ScalarEventFunction& zero_function,
                                  double level) {
  const Trajectory& partial = error.partial();
  if (error.code() != ErrorCode::StepSizeUnderflow || partial.empty()) throw error;
  const auto& last = partial.back();
  if (std::abs(zero_function(last.t, last.y)) > level * peak_value(partial)) throw error;
  return partial.with_termination(ZeroCrossing{last.t});
}

Trajectory settle_singular_zero(const Trajectory& trajectory, double level) {
  const auto* escape = std::get_if<Escape>(&trajectory.termination());
  if (!escape || trajectory.empty()) return trajectory;
  const auto& last = trajectory.back();
  if (std::abs(last.y[0]) <= level * peak_value(trajectory) && std::abs(last.y[0]) < std::abs(last.y[1])) {
    return trajectory.with_termination(ZeroCrossing{last.t});
  }
  return trajectory;
}

Trajectory integrate_to_zero(const VectorField& field, const State& y0, double t0, double t1, double tol,
                             const EventSpec& events, const IntegratorOptions& options, double level) {
  try {
    return settle_singular_zero(integrate_ivp(field, y0, t0, t1, tol, events, options), level);
  } catch (const IntegrationError& e) {
    return close_at_singular_zero(e, [](double, const State& y) { return y[0]; }, level);
  }
}

RootPair quadratic_roots(double b, double c) {
  if (!std::isfinite(b) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidArgument, "quadratic_roots: coefficients must be finite");
  }
  const double disc = b * b - 4.0 * c;
  if (disc < 0.0) return ComplexPair{-0.5 * b, 0.5 * std::sqrt(-disc)};
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  if (q == 0.0) return RealPair{0.0, 0.0};
  const double r1 = q;
  const double r2 = c / q;
  return RealPair{std::max(r1, r2), std::min(r1, r2)};
}

ZeroCount zero_count(std::span<const double> x, std::span<const double> f) {
  if (x.size() != f.size()) throw Error(ErrorCode::InvalidArgument, "zero_count: size mismatch");
  ZeroCount out;
  std::size_t prev = x.size();  // last index with a non-zero value
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0.0) continue;
    if (prev != x.size() && (f[i] > 0.0) != (f[prev] > 0.0)) {
      ++out.count;
      if (i - prev > 1) {
        out.locations.push_back(x[prev + 1]);
      } else {
        out.locations.push_back(x[prev] - f[prev] * (x[i] - x[prev]) / (f[i] - f[prev]));
      }
    }
    prev = i;
  }
  return out;
}

double continued_power(double v, double p) {
  if (v > 0.0) return std::pow(v, p);
  if (v == 0.0) return p > 0.0 ? 0.0 : (p == 0.0 ? 1.0 : std::numeric_limits<double>::quiet_NaN());
  if (p == std::trunc(p)) return std::pow(v, p);
  return p > 0.0 ? -std::pow(-v, p) : std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  out.back() = hi;
  return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw Error(ErrorCode::InvalidArgument, "logspace: bounds must be positive");
  std::vector<double> out = linspace(std::log(lo), std::log(hi), count);
  for (double& v : out) v = std::exp(v);
  if (!out.empty()) {
    out.front() = lo;
    out.back() = hi;
  }
  return out;
}

}  // namespace hh
