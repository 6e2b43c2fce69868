#include "hh/closed_forms.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hh/error.hpp"

namespace hh {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const double kCauchyK = std::sqrt(3.0) / 2.0;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_integer(double v) { return std::isfinite(v) && v == std::trunc(v); }

Jet eval_power_law(const PowerLaw& f, double x) {
  if (x == 0.0) return {f.a > 0.0 ? 0.0 : (f.a == 0.0 ? f.C : std::numeric_limits<double>::infinity()), kNaN, kNaN};
  const double u = f.C * std::pow(x, f.a);
  return {u, f.a * u / x, f.a * (f.a - 1.0) * u / (x * x)};
}

Jet eval_power_product(const PowerProduct& f, double x) {
  if (x == 0.0) return eval_power_law({f.C, f.a}, 0.0);
  const double s = 1.0 + f.alpha * x;
  const double u = f.C * std::pow(x, f.a) * std::pow(s, f.b);
  const double g1 = f.a / x + f.b * f.alpha / s;
  const double g2 = f.a * (f.a - 1.0) / (x * x) + 2.0 * f.a * f.b * f.alpha / (x * s) +
                    f.b * (f.b - 1.0) * f.alpha * f.alpha / (s * s);
  return {u, u * g1, u * g2};
}

Jet eval_cauchy_euler(const CauchyEuler& f, double x) {
  if (x == 0.0) return {0.0, kNaN, kNaN};
  const double theta = kCauchyK * std::log(x);
  const double S = f.c1 * std::sin(theta) + f.c2 * std::cos(theta);
  const double dS = kCauchyK * (f.c1 * std::cos(theta) - f.c2 * std::sin(theta));
  const double rx = std::sqrt(x);
  return {rx * S, (0.5 * S + dS) / rx, -S / (x * rx)};
}

Jet eval_bubble(const Bubble& f, double r) {
  const double m = 0.5 * (f.n - 2);
  const double K = std::pow(static_cast<double>(f.n) * (f.n - 2), 0.5 * m);
  const double l2 = f.lambda * f.lambda;
  const double s = 1.0 + l2 * r * r;
  const double amp = K * std::pow(f.lambda, m);
  const double u = amp * std::pow(s, -m);
  const double du = -2.0 * m * l2 * r * amp * std::pow(s, -m - 1.0);
  const double d2u = -2.0 * m * l2 * amp * (std::pow(s, -m - 1.0) - 2.0 * (m + 1.0) * l2 * r * r * std::pow(s, -m - 2.0));
  return {u, du, d2u};
}

double radial_residual(double x, double u, double du, double d2u, const ProblemParams& params) {
  const double drift = params.n == 1 ? 0.0 : (params.n - 1) * du / x;
  return std::abs(d2u + drift + std::pow(x, params.sigma) * checked_power(u, params.p));
}

void check_grid(std::span<const double> grid) {
  for (double x : grid) {
    if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "residual: grid points must be > 0");
  }
}

}  // namespace

double checked_power(double u, double p) {
  if (u > 0.0) return std::pow(u, p);
  if (u == 0.0 && p >= 0.0) return std::pow(u, p);
  if (u < 0.0 && is_integer(p)) return std::pow(u, p);
  throw Error(ErrorCode::NonPositiveValue, "u^p undefined for u <= 0 with this exponent");
}

Jet evaluate(const ClosedForm& form, double x) {
  if (!(x >= 0.0)) throw Error(ErrorCode::InvalidArgument, "closed form evaluated at x < 0");
  return std::visit(Overloaded{
                        [&](const PowerLaw& f) { return eval_power_law(f, x); },
                        [&](const PowerProduct& f) { return eval_power_product(f, x); },
                        [&](const CauchyEuler& f) { return eval_cauchy_euler(f, x); },
                        [&](const Bubble& f) { return eval_bubble(f, x); },
                    },
                    form);
}

std::string variant_name(const ClosedForm& form) {
  return std::visit(Overloaded{
                        [](const PowerLaw&) { return std::string("PowerLaw"); },
                        [](const PowerProduct&) { return std::string("PowerProduct"); },
                        [](const CauchyEuler&) { return std::string("CauchyEuler"); },
                        [](const Bubble&) { return std::string("Bubble"); },
                    },
                    form);
}

PowerLaw power_law(double p, double sigma) {
  if (!std::isfinite(p) || !std::isfinite(sigma)) throw Error(ErrorCode::InvalidArgument, "power_law: non-finite input");
  if (p == 1.0) throw Error(ErrorCode::DegenerateExponent, "power_law: p = 1");
  if (sigma == -2.0) throw Error(ErrorCode::DegenerateExponent, "power_law: sigma = -2 gives a = 0");
  const double a = (2.0 + sigma) / (1.0 - p);
  const double k = a * (1.0 - a);
  if (!(k > 0.0)) throw Error(ErrorCode::NotPositive, "power_law: a(1-a) <= 0, no positive coefficient");
  return {std::pow(k, 1.0 / (p - 1.0)), a};
}

PowerProduct family_member(double alpha) {
  if (!std::isfinite(alpha)) throw Error(ErrorCode::InvalidArgument, "family_member: alpha must be finite");
  if (alpha < 0.0) throw Error(ErrorCode::NegativeAlpha, "family_member: alpha must be >= 0");
  return {std::pow(25.0 / 6.0, 0.2), 0.6, alpha, 0.4};
}

CauchyEuler cauchy_euler(double c1, double c2) {
  if (!std::isfinite(c1) || !std::isfinite(c2)) throw Error(ErrorCode::InvalidArgument, "cauchy_euler: non-finite");
  if (c1 == 0.0 && c2 == 0.0) throw Error(ErrorCode::InvalidArgument, "cauchy_euler: (c1, c2) = (0, 0)");
  return {c1, c2};
}

std::vector<double> cauchy_euler_zeros(const CauchyEuler& form, double lo, double hi) {
  if (!(lo > 0.0) || !(hi >= lo)) throw Error(ErrorCode::InvalidArgument, "cauchy_euler_zeros: need 0 < lo <= hi");
  // c1 sin(t) + c2 cos(t) = R sin(t + phi) vanishes at t = j pi - phi
  const double phi = std::atan2(form.c2, form.c1);
  const double tlo = kCauchyK * std::log(lo);
  const double thi = kCauchyK * std::log(hi);
  std::vector<double> zeros;
  for (double j = std::ceil((tlo + phi) / std::numbers::pi); j * std::numbers::pi - phi <= thi; j += 1.0) {
    const double x = std::exp((j * std::numbers::pi - phi) / kCauchyK);
    if (x >= lo && x <= hi) zeros.push_back(x);
  }
  return zeros;
}

Bubble bubble(int n) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "bubble: n must be >= 3");
  return {n, 1.0};
}

double residual(const ClosedForm& form, const ProblemParams& params, std::span<const double> grid) {
  validate(params);
  check_grid(grid);
  double worst = 0.0;
  for (double x : grid) {
    const Jet j = evaluate(form, x);
    worst = std::max(worst, radial_residual(x, j.u, j.du, j.d2u, params));
  }
  return worst;
}

double residual(const Trajectory& trajectory, const ProblemParams& params, std::span<const double> grid) {
  validate(params);
  check_grid(grid);
  double worst = 0.0;
  for (double x : grid) {
    const State y = trajectory.value_at(x);
    const State dy = trajectory.derivative_at(x);
    worst = std::max(worst, radial_residual(x, y[0], y[1], dy[1], params));
  }
  return worst;
}

}  // namespace hh
