#include "hh/local_family.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hh/closed_forms.hpp"
#include "hh/error.hpp"

namespace hh {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSingularLevel = 1e-3;

// s[(1+w)^p - 1 - p w], NaN for 1 + w <= 0
double f0(double w, double p, double s) {
  if (!(w > -1.0)) return kNaN;
  return s * (std::expm1(p * std::log1p(w)) - p * w);
}

double interp(const std::vector<double>& x, const std::vector<double>& v, double t) {
  // uniform grid starting at x[0] = h
  const double h = x[0];
  if (t <= h) return v[0] * t / h;  // both psi components vanish at 0
  const std::size_t i = std::min(static_cast<std::size_t>(t / h) - 1, x.size() - 2);
  const double s = (t - x[i]) / h;
  return v[i] + s * (v[i + 1] - v[i]);
}

VectorField weighted_field(double p, double sigma) {
  return [p, sigma](double x, const State& y) -> State {
    return {y[1], -std::pow(x, sigma) * continued_power(y[0], p)};
  };
}

EventSpec zero_event() {
  EventSpec ev;
  ev.zero_function = [](double, const State& y) { return y[0]; };
  ev.escape_threshold = 1e12;
  return ev;
}

State handoff_state(const LocalSolution& local) {
  const double T = local.x.back();
  const double C = power_law(local.p, local.sigma).C;
  const double uaT = C * std::pow(T, local.a);
  const double w = local.w.back();
  const double xdw = local.xdw.back();
  return {uaT * (1.0 + w), uaT / T * (local.a * (1.0 + w) + xdw)};
}

bool nonincreasing(double next, double prev) { return next <= prev + 1e-9 * std::max(1.0, std::abs(prev)); }

}  // namespace

State LocalSolution::at(double t) const {
  if (!(t > 0.0) || t > x.back() * (1.0 + 1e-15)) throw Error(ErrorCode::InvalidArgument, "LocalSolution::at: x outside (0, T]");
  t = std::min(t, x.back());
  const double xg = std::pow(t, mu_plus);
  if (w0 == 0.0) return {0.0, 0.0};
  // eta = w0 + psi1 and x^-g (x w') = g w0 + psi2 are smooth; interpolate the psi parts
  std::vector<double> psi1(eta.size()), psi2(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) {
    psi1[i] = eta[i] - w0;
    psi2[i] = xdw[i] / std::pow(x[i], mu_plus) - mu_plus * w0;
  }
  return {xg * (w0 + interp(x, psi1, t)), xg * (mu_plus * w0 + interp(x, psi2, t))};
}

bool in_case_c1(double p, double sigma) { return sigma > -2.0 && p < -1.0 - sigma; }

LocalSolution picard_local(double p, double sigma, double w0, double T, const PicardOptions& options) {
  if (!in_case_c1(p, sigma)) throw Error(ErrorCode::InvalidParams, "picard_local: needs sigma > -2 and p < -1 - sigma");
  if (!std::isfinite(w0) || !(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "picard_local: need finite w0 and T > 0");
  if (options.grid_exponent < 2 || options.grid_exponent > 24) {
    throw Error(ErrorCode::InvalidArgument, "picard_local: grid exponent out of range");
  }

  const double a = (2.0 + sigma) / (1.0 - p);
  const double s = a * (1.0 - a);
  const double b = 2.0 * a - 1.0;
  const double c = s * (p - 1.0);
  const double g = std::get<RealPair>(quadratic_roots(b, c)).mu_plus;
  const std::size_t N = std::size_t{1} << options.grid_exponent;

  // linear part A - g + 1 of the integrand, A = [[0, 1], [-c, -b]]
  const double L00 = 1.0 - g, L01 = 1.0, L10 = -c, L11 = -b - g + 1.0;
  const State y0{w0, g * w0};

  LocalSolution out{p, sigma, a, g, w0, T, 0, {}, {}, {}, {}, 0.0};
  while (true) {
    const double h = T / static_cast<double>(N);
    GridFunction<State> initial;
    initial.x.resize(N);
    for (std::size_t i = 0; i < N; ++i) initial.x[i] = h * static_cast<double>(i + 1);
    initial.values.assign(N, State{0.0, 0.0});

    auto map = [&](const GridFunction<State>& psi) {
      std::vector<State> F(N);
      for (std::size_t i = 0; i < N; ++i) {
        const double x = psi.x[i];
        const double xg = std::pow(x, g);
        const State& q = psi.values[i];
        const double wv = xg * (y0[0] + q[0]);
        F[i] = {L00 * q[0] + L01 * q[1], L10 * q[0] + L11 * q[1] - f0(wv, p, s) / xg};
      }
      // (1/x) int_0^x F with F ~ x^g on the first cell, trapezoid after
      std::vector<State> next(N);
      State I{F[0][0] * h / (g + 1.0), F[0][1] * h / (g + 1.0)};
      next[0] = {I[0] / psi.x[0], I[1] / psi.x[0]};
      for (std::size_t i = 1; i < N; ++i) {
        I[0] += 0.5 * h * (F[i - 1][0] + F[i][0]);
        I[1] += 0.5 * h * (F[i - 1][1] + F[i][1]);
        next[i] = {I[0] / psi.x[i], I[1] / psi.x[i]};
      }
      return next;
    };

    try {
      FixedPointOptions fo{options.tol, options.max_iter, options.max_contraction};
      auto result = w0 == 0.0 ? FixedPointResult<State>{initial, 0, 0.0, {}} : fixed_point_solve<State>(map, initial, fo);
      out.T = T;
      out.iterations = result.iterations;
      out.x = initial.x;
      out.w.resize(N);
      out.xdw.resize(N);
      out.eta.resize(N);
      for (std::size_t i = 0; i < N; ++i) {
        const double xg = std::pow(out.x[i], g);
        const State& q = result.solution.values[i];
        out.eta[i] = w0 + q[0];
        out.w[i] = xg * out.eta[i];
        out.xdw[i] = xg * (g * w0 + q[1]);
      }
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoConvergence) throw;
      T *= 0.5;
      if (T < options.T_floor) {
        throw Error(ErrorCode::NoConvergence, "picard_local: no contraction above the T floor");
      }
    }
  }

  // residual of x (x w')' + b x w' + c w + f0(w) = 0 on (T/100, T]
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double x = out.x[i];
    if (x <= T / 100.0) continue;
    const double h = out.x[0];
    double d;
    if (i + 1 < N) {
      d = (out.xdw[i + 1] - out.xdw[i - 1]) / (2.0 * h);
    } else {
      d = (3.0 * out.xdw[i] - 4.0 * out.xdw[i - 1] + out.xdw[i - 2]) / (2.0 * h);
    }
    const double terms[] = {x * d, b * out.xdw[i], c * out.w[i], f0(out.w[i], p, s)};
    worst = std::max(worst, std::abs(terms[0] + terms[1] + terms[2] + terms[3]));
    for (double t : terms) scale = std::max(scale, std::abs(t));
  }
  out.residual = scale > 0.0 ? worst / scale : 0.0;
  return out;
}

State FamilyMember::at(double x) const {
  if (x <= local.T) {
    const double C = power_law(local.p, local.sigma).C;
    const State wl = local.at(x);
    const double ua = C * std::pow(x, local.a);
    return {ua * (1.0 + wl[0]), ua / x * (local.a * (1.0 + wl[0]) + wl[1])};
  }
  return tail.value_at(x);
}

FamilyMember extend_family(const LocalSolution& local, double x_max, double tol) {
  if (local.w0 < 0.0) throw Error(ErrorCode::InvalidArgument, "extend_family: w0 must be >= 0");
  if (!(x_max > local.T)) throw Error(ErrorCode::InvalidArgument, "extend_family: x_max must exceed T");
  Trajectory tail;
  if (local.w0 == 0.0) {
    // the member is u_a itself, which an IVP would only track up to the
    // growth of its unstable mode
    const ClosedForm ua{power_law(local.p, local.sigma)};
    TrajectoryBuilder b;
    for (double x : logspace(local.T, x_max, 513)) {
      const Jet j = evaluate(ua, x);
      if (b.empty()) {
        b.start(x, {j.u, j.du}, {j.du, j.d2u});
      } else {
        b.push_hermite(x, {j.u, j.du}, {j.du, j.d2u});
      }
    }
    tail = std::move(b).finish(ReachedSpanEnd{}, tol);
  } else {
    tail = integrate_to_zero(weighted_field(local.p, local.sigma), handoff_state(local), local.T, x_max, tol,
                             zero_event(), {}, kSingularLevel);
  }
  if (!std::holds_alternative<ReachedSpanEnd>(tail.termination())) {
    throw Error(ErrorCode::LostPositivity, "extend_family: member lost positivity at x = " +
                                               std::to_string(tail.t_end()) + " (" + describe(tail.termination()) + ")");
  }

  FamilyMember m{local, std::move(tail), 0.0, true, true, true, 0};
  const PowerLaw ua = power_law(local.p, local.sigma);
  const auto samples = m.tail.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double uax = ua.C * std::pow(samples[i].t, ua.a);
    const bool above = local.w0 > 0.0 ? samples[i].y[0] > uax : samples[i].y[0] >= uax * (1.0 - 1e-8);
    if (!above) {
      m.above_ua = false;
      ++m.violations;
    }
    if (i > 0) {
      if (!nonincreasing(samples[i].y[1], samples[i - 1].y[1])) {
        m.du_nonincreasing = false;
        ++m.violations;
      }
      if (!nonincreasing(samples[i - 1].y[0], samples[i].y[0])) {
        m.u_nondecreasing = false;
        ++m.violations;
      }
    }
  }
  m.slope_estimate = m.tail.back().y[0] / m.tail.t_end();
  return m;
}

std::string to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::None: return "None";
    case CertificateKind::ZeroCrossing: return "ZeroCrossing";
    case CertificateKind::ConcaveExtrapolation: return "ConcaveExtrapolation";
  }
  return "None";
}

BelowUaReport below_ua_experiment(double p, double sigma, double w0, double x_max, double tol, int max_retries) {
  if (!(w0 <= 0.0)) throw Error(ErrorCode::InvalidArgument, "below_ua_experiment: w0 must be <= 0");
  const LocalSolution local = picard_local(p, sigma, w0, std::min(0.1, 0.5 * x_max));
  const State start = handoff_state(local);
  double X = x_max;
  for (int retry = 0; retry <= max_retries; ++retry, X *= 2.0) {
    Trajectory tail =
        integrate_to_zero(weighted_field(p, sigma), start, local.T, X, tol, zero_event(), {}, kSingularLevel);
    if (const auto* zc = std::get_if<ZeroCrossing>(&tail.termination())) {
      return {true, CertificateKind::ZeroCrossing, zc->location, X, retry, std::move(tail)};
    }
    if (!std::holds_alternative<ReachedSpanEnd>(tail.termination())) {
      throw Error(ErrorCode::Inconclusive, "below_ua_experiment: unexpected stop " + describe(tail.termination()));
    }
    const State end = tail.back().y;
    if (end[1] < 0.0) {
      // u is concave, so the tangent line bounds u from above
      return {true, CertificateKind::ConcaveExtrapolation, X + end[0] / -end[1], X, retry, std::move(tail)};
    }
    if (w0 == 0.0) return {false, CertificateKind::None, kNaN, X, retry, std::move(tail)};
  }
  throw Error(ErrorCode::Inconclusive, "below_ua_experiment: no certificate up to x = " + std::to_string(X / 2.0));
}

SturmReport sturm_compare(const LienardSystem& sys, const Trajectory& trajectory, double m, double z2) {
  const double bound = 0.25 * sys.damping * sys.damping;
  if (!(m > bound)) throw Error(ErrorCode::InvalidArgument, "sturm_compare: m must exceed (2a-1)^2/4");
  if (!trajectory.covers(z2)) throw Error(ErrorCode::InvalidArgument, "sturm_compare: z2 outside the trajectory");
  const double V2 = trajectory.value_at(z2)[0];
  const double q2 = V2 > 0.0 ? sys.stiffness * (std::pow(V2, sys.p - 1.0) - 1.0) : -std::numeric_limits<double>::infinity();
  if (!(V2 > 0.0 && V2 < 1.0) || !(q2 > m)) {
    throw Error(ErrorCode::PreconditionUnmet, "sturm_compare: q2(z2) <= m; move z2 further along");
  }
  SturmReport r{m, 0.5 * std::sqrt(4.0 * m - sys.damping * sys.damping), z2, 0.0, std::nullopt};
  r.b = z2 + std::numbers::pi / r.K;

  if (const auto* zc = std::get_if<ZeroCrossing>(&trajectory.termination())) {
    if (zc->location > z2 && zc->location < r.b) r.zero_found = zc->location;
  }
  if (!r.zero_found) {
    std::vector<double> z, v;
    for (const auto& s : trajectory.samples()) {
      if (s.t >= z2 && s.t < r.b) {
        z.push_back(s.t);
        v.push_back(s.y[0]);
      }
    }
    const ZeroCount zc = zero_count(z, v);
    if (zc.count > 0) r.zero_found = zc.locations.front();
  }
  return r;
}

double sturm_entry_point(const LienardSystem& sys, const Trajectory& trajectory, double m) {
  for (const auto& s : trajectory.samples()) {
    const double V = s.y[0];
    if (V > 0.0 && V < 1.0 && sys.stiffness * (std::pow(V, sys.p - 1.0) - 1.0) > 1.1 * m) return s.t;
  }
  throw Error(ErrorCode::PreconditionUnmet, "sturm_entry_point: q2 never exceeds m on this trajectory");
}

}  // namespace hh
