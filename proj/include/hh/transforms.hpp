#pragma once

#include "hh/closed_forms.hpp"
#include "hh/params.hpp"
#include "hh/trajectory.hpp"

namespace hh {

struct KelvinImage {
  double sigma_tilde;
  ProblemParams params;  // same p, sigma replaced by sigma_tilde
};

/// sigma -> -p - sigma - 3 for the half-line problem. WrongDimension for
/// n >= 2, InvalidParams for the whole-line domain.
KelvinImage kelvin(const ProblemParams& params);

/// v(x) = x u(1/x) of a closed form. Bubbles have no one-dimensional image
/// (WrongDimension).
ClosedForm kelvin(const ClosedForm& form);

/// Kelvin image of a trajectory of (u, u') on x > 0. The image is resampled
/// on `samples` points log-spaced over the reflected span and joined by
/// cubic Hermite pieces built from the dense output of the source.
Trajectory kelvin(const Trajectory& trajectory, std::size_t samples = 2001);

/// v(x) = lambda^((2+sigma)/(p-1)) u(lambda x). DegenerateExponent for p = 1.
ClosedForm scale(const ClosedForm& form, double lambda, const ProblemParams& params);
Trajectory scale(const Trajectory& trajectory, double lambda, const ProblemParams& params);

/// Samples of (u, u') on x > 0 to samples of (V, dV/dz) on z = log x with
/// V = u / u_a. Each sample is mapped exactly; pieces between samples are
/// cubic Hermite. NotPositive if u <= 0 anywhere; DegenerateExponent when
/// the power law u_a is not a positive solution (a outside (0, 1)).
Trajectory to_autonomous(const Trajectory& trajectory, double p, double sigma);

/// Inverse of to_autonomous.
Trajectory from_autonomous(const Trajectory& trajectory, double p, double sigma);

}  // namespace hh
