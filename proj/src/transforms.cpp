#include "hh/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "hh/error.hpp"
#include "hh/numerics.hpp"

namespace hh {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double scaling_exponent(const ProblemParams& params) {
  if (params.p == 1.0) throw Error(ErrorCode::DegenerateExponent, "scale: p = 1 has no scaling exponent");
  return (2.0 + params.sigma) / (params.p - 1.0);
}

PowerLaw autonomous_power_law(double p, double sigma) {
  try {
    return power_law(p, sigma);
  } catch (const Error& e) {
    throw Error(ErrorCode::DegenerateExponent, std::string("autonomous reduction needs a valid power law: ") + e.what());
  }
}

// event locations live on the abscissa and follow its change of variable
template <class Map>
Event remap_event(const Event& event, Map map) {
  return std::visit(Overloaded{
                        [&](const ZeroCrossing& e) -> Event { return ZeroCrossing{map(e.location)}; },
                        [&](const Escape& e) -> Event { return Escape{e.threshold, map(e.location)}; },
                        [](const auto& e) -> Event { return e; },
                    },
                    event);
}

}  // namespace

KelvinImage kelvin(const ProblemParams& params) {
  validate(params);
  if (params.n >= 2) throw Error(ErrorCode::WrongDimension, "kelvin: only the one-dimensional problem is handled");
  if (params.domain != Domain::HalfLine) throw Error(ErrorCode::InvalidParams, "kelvin: requires the half-line domain");
  KelvinImage image{-params.p - params.sigma - 3.0, params};
  image.params.sigma = image.sigma_tilde;
  return image;
}

ClosedForm kelvin(const ClosedForm& form) {
  return std::visit(Overloaded{
                        [](const PowerLaw& f) -> ClosedForm { return PowerLaw{f.C, 1.0 - f.a}; },
                        [](const PowerProduct& f) -> ClosedForm {
                          // x C x^-a (1 + alpha/x)^b = C alpha^b x^(1-a-b) (1 + x/alpha)^b
                          if (f.alpha == 0.0) return PowerLaw{f.C, 1.0 - f.a};
                          if (f.alpha < 0.0) throw Error(ErrorCode::NegativeAlpha, "kelvin: alpha must be >= 0");
                          return PowerProduct{f.C * std::pow(f.alpha, f.b), 1.0 - f.a - f.b, 1.0 / f.alpha, f.b};
                        },
                        [](const CauchyEuler& f) -> ClosedForm { return CauchyEuler{-f.c1, f.c2}; },
                        [](const Bubble&) -> ClosedForm {
                          throw Error(ErrorCode::WrongDimension, "kelvin: bubbles live in n >= 3");
                        },
                    },
                    form);
}

Trajectory kelvin(const Trajectory& trajectory, std::size_t samples) {
  if (trajectory.size() < 2) throw Error(ErrorCode::InvalidArgument, "kelvin: trajectory needs two samples");
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "kelvin: need at least two resample points");
  const double xlo = std::min(trajectory.t_begin(), trajectory.t_end());
  const double xhi = std::max(trajectory.t_begin(), trajectory.t_end());
  if (!(xlo > 0.0)) throw Error(ErrorCode::InvalidArgument, "kelvin: trajectory must live on x > 0");

  TrajectoryBuilder builder;
  for (double r : logspace(1.0 / xhi, 1.0 / xlo, samples)) {
    const double x = std::clamp(1.0 / r, xlo, xhi);
    const State y = trajectory.value_at(x);
    const double d2u = trajectory.derivative_at(x)[1];
    const State v{r * y[0], y[0] - y[1] / r};
    const State dv{v[1], d2u / (r * r * r)};
    if (builder.empty()) {
      builder.start(r, v, dv);
    } else {
      builder.push_hermite(r, v, dv);
    }
  }
  return std::move(builder).finish(ReachedSpanEnd{}, trajectory.tolerance_used());
}

ClosedForm scale(const ClosedForm& form, double lambda, const ProblemParams& params) {
  validate(params);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::InvalidArgument, "scale: lambda must be > 0");
  const double e = scaling_exponent(params);
  return std::visit(Overloaded{
                        [&](const PowerLaw& f) -> ClosedForm { return PowerLaw{f.C * std::pow(lambda, e + f.a), f.a}; },
                        [&](const PowerProduct& f) -> ClosedForm {
                          return PowerProduct{f.C * std::pow(lambda, e + f.a), f.a, lambda * f.alpha, f.b};
                        },
                        [&](const CauchyEuler&) -> ClosedForm {
                          throw Error(ErrorCode::DegenerateExponent, "scale: Cauchy-Euler solutions have p = 1");
                        },
                        [&](const Bubble& f) -> ClosedForm {
                          if (std::abs(e - 0.5 * (f.n - 2)) > 1e-12 * (1.0 + std::abs(e))) {
                            throw Error(ErrorCode::InvalidArgument, "scale: bubble scaled with foreign exponents");
                          }
                          return Bubble{f.n, f.lambda * lambda};
                        },
                    },
                    form);
}

Trajectory scale(const Trajectory& trajectory, double lambda, const ProblemParams& params) {
  validate(params);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::InvalidArgument, "scale: lambda must be > 0");
  const double e = scaling_exponent(params);
  const double f = std::pow(lambda, e);
  return trajectory.rescaled(lambda, {f, f * lambda});
}

Trajectory to_autonomous(const Trajectory& trajectory, double p, double sigma) {
  const PowerLaw ua = autonomous_power_law(p, sigma);
  const double a = ua.a;
  TrajectoryBuilder builder;
  for (const auto& s : trajectory.samples()) {
    const double x = s.t;
    if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, "to_autonomous: samples must have x > 0");
    if (!(s.y[0] > 0.0)) throw Error(ErrorCode::NotPositive, "to_autonomous: u must be positive");
    const double inv = 1.0 / (ua.C * std::pow(x, a));
    const double V = s.y[0] * inv;
    const double Vdot = x * s.y[1] * inv - a * V;
    const double Vddot = (x * x * s.dy[1] + (1.0 - 2.0 * a) * x * s.y[1] + a * a * s.y[0]) * inv;
    const double z = std::log(x);
    if (builder.empty()) {
      builder.start(z, {V, Vdot}, {Vdot, Vddot});
    } else {
      builder.push_hermite(z, {V, Vdot}, {Vdot, Vddot});
    }
  }
  const Event event = remap_event(trajectory.termination(), [](double x) { return std::log(x); });
  return std::move(builder).finish(event, trajectory.tolerance_used());
}

Trajectory from_autonomous(const Trajectory& trajectory, double p, double sigma) {
  const PowerLaw ua = autonomous_power_law(p, sigma);
  const double a = ua.a;
  TrajectoryBuilder builder;
  for (const auto& s : trajectory.samples()) {
    const double x = std::exp(s.t);
    const double uax = ua.C * std::pow(x, a);
    const double u = s.y[0] * uax;
    const double du = (s.y[1] + a * s.y[0]) * uax / x;
    const double d2u = (uax * s.dy[1] - (1.0 - 2.0 * a) * x * du - a * a * u) / (x * x);
    if (builder.empty()) {
      builder.start(x, {u, du}, {du, d2u});
    } else {
      builder.push_hermite(x, {u, du}, {du, d2u});
    }
  }
  const Event event = remap_event(trajectory.termination(), [](double z) { return std::exp(z); });
  return std::move(builder).finish(event, trajectory.tolerance_used());
}

}  // namespace hh
