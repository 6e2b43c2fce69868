#pragma once

#include <span>
#include <variant>
#include <vector>

#include "hh/params.hpp"
#include "hh/trajectory.hpp"

namespace hh {

/// u = C x^a
struct PowerLaw {
  double C;
  double a;
};

/// u = C x^a (1 + alpha x)^b
struct PowerProduct {
  double C;
  double a;
  double alpha;
  double b;
};

/// u = sqrt(x) (c1 sin(k log x) + c2 cos(k log x)), k = sqrt(3)/2
struct CauchyEuler {
  double c1;
  double c2;
};

/// u = K lambda^m (1 + lambda^2 r^2)^(-m), m = (n-2)/2, K = (n(n-2))^(m/2).
/// lambda = 1 is the standard bubble; other values come from scaling.
struct Bubble {
  int n;
  double lambda = 1.0;
};

using ClosedForm = std::variant<PowerLaw, PowerProduct, CauchyEuler, Bubble>;

struct Jet {
  double u;
  double du;
  double d2u;
};

/// Value and exact first/second derivatives. At x = 0 only the value of
/// the continuous limit is defined (du, d2u are NaN there).
Jet evaluate(const ClosedForm& form, double x);

std::string variant_name(const ClosedForm& form);

/// Power-law solution c_a x^a with a = (2+sigma)/(1-p), c_a = (a(1-a))^(1/(p-1)).
/// Throws DegenerateExponent for p = 1 or sigma = -2, NotPositive when a(1-a) <= 0.
PowerLaw power_law(double p, double sigma);

/// Member of the (sigma = 1, p = -4) family: (25/6)^(1/5) x^(3/5) (1 + alpha x)^(2/5).
PowerProduct family_member(double alpha);

/// General solution of r^2 u'' + u = 0. Throws InvalidArgument for (0, 0).
CauchyEuler cauchy_euler(double c1, double c2);

/// Zeros of a Cauchy-Euler solution inside [lo, hi], ascending.
std::vector<double> cauchy_euler_zeros(const CauchyEuler& form, double lo, double hi);

Bubble bubble(int n);

/// max over grid of |u'' + ((n-1)/x) u' + x^sigma u^p|.
double residual(const ClosedForm& form, const ProblemParams& params, std::span<const double> grid);

/// Same residual for a trajectory holding (u, u'), using dense-output derivatives.
double residual(const Trajectory& trajectory, const ProblemParams& params, std::span<const double> grid);

/// u^p with the domain check shared by every residual: NonPositiveValue when
/// u <= 0 and p is not an integer (u = 0 is allowed for p >= 0).
double checked_power(double u, double p);

}  // namespace hh
