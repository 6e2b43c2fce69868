#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hh/lienard.hpp"
#include "hh/numerics.hpp"
#include "hh/trajectory.hpp"

namespace hh {

/// Local solution u = u_a (1 + w) near x = 0 with w ~ w0 x^mu_plus.
struct LocalSolution {
  double p;
  double sigma;
  double a;
  double mu_plus;
  double w0;
  double T;
  int iterations;
  std::vector<double> x;      // uniform grid on (0, T]
  std::vector<double> w;
  std::vector<double> xdw;    // x w'(x)
  std::vector<double> eta;    // x^-mu_plus w(x)
  double residual;            // scaled residual of the w-equation on (T/100, T]

  /// w and x w' at any x in (0, T], interpolated through eta.
  State at(double x) const;
};

struct PicardOptions {
  int grid_exponent = 12;     // 2^k + 1 grid points
  double tol = 1e-13;
  int max_iter = 500;
  double max_contraction = 0.9;
  double T_floor = 1e-8;
};

/// True for sigma > -2 and p < -1 - sigma.
bool in_case_c1(double p, double sigma);

/// Picard iteration for the local family member with leading coefficient
/// w0. Halves T while the map fails to contract; NoConvergence below the
/// floor. InvalidParams outside case C1.
LocalSolution picard_local(double p, double sigma, double w0, double T, const PicardOptions& options = {});

/// A family member continued to (0, x_max]: the Picard grid near 0 followed
/// by an IVP trajectory of (u, u') from x = T.
struct FamilyMember {
  LocalSolution local;
  Trajectory tail;
  double slope_estimate;  // u(x_max) / x_max
  bool above_ua;
  bool du_nonincreasing;
  bool u_nondecreasing;
  int violations;

  double x_max() const { return tail.t_end(); }
  /// (u, u') at x in (0, x_max].
  State at(double x) const;
};

/// Continues a local solution with w0 >= 0. LostPositivity if u reaches 0.
FamilyMember extend_family(const LocalSolution& local, double x_max, double tol);

enum class CertificateKind { None, ZeroCrossing, ConcaveExtrapolation };
std::string to_string(CertificateKind kind);

struct BelowUaReport {
  bool failed;              // a finite-x obstruction was found
  CertificateKind kind;
  double x_star;            // crossing or bound on it; NaN when none
  double x_max_used;
  int retries;
  Trajectory tail;
};

/// Continues the member with w0 <= 0 and returns where positivity is lost.
/// Doubles x_max up to `max_retries` times; Inconclusive beyond that.
BelowUaReport below_ua_experiment(double p, double sigma, double w0, double x_max, double tol,
                                  int max_retries = 8);

struct SturmReport {
  double m;
  double K;
  double z2;
  double b;
  std::optional<double> zero_found;
};

/// Sturm comparison for a trajectory of (V, V') with 0 < V < 1 past z2.
/// InvalidArgument unless m > (2a-1)^2/4; PreconditionUnmet when
/// q2(z2) = a(1-a)(V(z2)^(p-1) - 1) <= m.
SturmReport sturm_compare(const LienardSystem& sys, const Trajectory& trajectory, double m, double z2);

/// First sample abscissa at which q2 exceeds m by a 10% margin; PreconditionUnmet when none.
double sturm_entry_point(const LienardSystem& sys, const Trajectory& trajectory, double m);

}  // namespace hh
