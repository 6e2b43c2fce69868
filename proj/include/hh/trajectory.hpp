#pragma once

#include <array>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hh {

/// Phase state of every second-order problem handled here: (value, derivative).
using State = std::array<double, 2>;

struct ZeroCrossing {
  double location;
};

struct Escape {
  double threshold;
  double location;
};

struct ConvergedToEquilibrium {
  std::string label;
  double residual;
};

struct ReachedSpanEnd {};

/// Why an integration stopped.
using Event = std::variant<ZeroCrossing, Escape, ConvergedToEquilibrium, ReachedSpanEnd>;

std::string describe(const Event& event);

/// Sampled solution path with a piecewise-polynomial dense output.
///
/// Segment i joins samples i and i+1. Each segment stores the quartic
/// continuous extension of the Dormand-Prince pair,
///   y(t0 + s h) = r0 + s (r1 + (1-s) (r2 + s (r3 + (1-s) r4))),
/// which reduces to the cubic Hermite interpolant when r4 = 0. The
/// polynomial's own step `h` may overshoot the next sample when a step was
/// truncated at an event.
class Trajectory {
 public:
  struct Sample {
    double t;
    State y;
    State dy;
  };

  struct Segment {
    double t0;
    double h;
    std::array<State, 5> r;
  };

  Trajectory() = default;

  std::span<const Sample> samples() const { return samples_; }
  std::span<const Segment> segments() const { return segments_; }
  const Event& termination() const { return termination_; }
  double tolerance_used() const { return tolerance_; }

  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }
  const Sample& front() const { return samples_.front(); }
  const Sample& back() const { return samples_.back(); }
  double t_begin() const { return samples_.front().t; }
  double t_end() const { return samples_.back().t; }
  /// +1 for increasing abscissae, -1 for decreasing.
  int direction() const;

  /// True when t lies inside the sampled span (either orientation).
  bool covers(double t) const;

  /// Dense-output state at t; throws InvalidArgument outside the span.
  State value_at(double t) const;
  /// Time derivative of the dense-output polynomial at t.
  State derivative_at(double t) const;

  /// Same path with a different termination record.
  Trajectory with_termination(Event event) const;

  /// Affine reparametrisation t -> t / lambda with componentwise value
  /// scaling y_k -> factor[k] * y_k. Derivatives pick up the chain-rule factor.
  Trajectory rescaled(double lambda, State factor) const;

 private:
  std::size_t locate(double t) const;

  std::vector<Sample> samples_;
  std::vector<Segment> segments_;
  Event termination_{ReachedSpanEnd{}};
  double tolerance_ = 0.0;

  friend class TrajectoryBuilder;
};

/// Incremental construction of a Trajectory. Enforces strictly monotone
/// abscissae and finite states.
class TrajectoryBuilder {
 public:
  void start(double t, const State& y, const State& dy);
  /// Appends a sample reached through an explicit dense segment.
  void push(double t, const State& y, const State& dy, const Trajectory::Segment& segment);
  /// Appends a sample joined to the previous one by cubic Hermite interpolation.
  void push_hermite(double t, const State& y, const State& dy);

  bool empty() const { return samples_.empty(); }
  const Trajectory::Sample& back() const { return samples_.back(); }
  std::size_t size() const { return samples_.size(); }

  Trajectory finish(Event termination, double tolerance) &&;

 private:
  void check_next(double t, const State& y) const;

  std::vector<Trajectory::Sample> samples_;
  std::vector<Trajectory::Segment> segments_;
};

State evaluate_segment(const Trajectory::Segment& segment, double t);
State differentiate_segment(const Trajectory::Segment& segment, double t);

}  // namespace hh
