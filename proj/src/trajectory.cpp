#include "hh/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hh/error.hpp"

namespace hh {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool finite(const State& y) { return std::isfinite(y[0]) && std::isfinite(y[1]); }

}  // namespace

std::string describe(const Event& event) {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&](const ZeroCrossing& e) { out << "ZeroCrossing(" << e.location << ")"; },
                 [&](const Escape& e) { out << "Escape(" << e.threshold << ", " << e.location << ")"; },
                 [&](const ConvergedToEquilibrium& e) {
                   out << "ConvergedToEquilibrium(" << e.label << ", " << e.residual << ")";
                 },
                 [&](const ReachedSpanEnd&) { out << "ReachedSpanEnd"; },
             },
             event);
  return out.str();
}

State evaluate_segment(const Trajectory::Segment& seg, double t) {
  const double s = (t - seg.t0) / seg.h;
  const double s1 = 1.0 - s;
  State y;
  for (int k = 0; k < 2; ++k) {
    const auto& r = seg.r;
    y[k] = r[0][k] + s * (r[1][k] + s1 * (r[2][k] + s * (r[3][k] + s1 * r[4][k])));
  }
  return y;
}

State differentiate_segment(const Trajectory::Segment& seg, double t) {
  const double s = (t - seg.t0) / seg.h;
  const double s1 = 1.0 - s;
  State dy;
  for (int k = 0; k < 2; ++k) {
    const auto& r = seg.r;
    const double g = r[2][k] + s * (r[3][k] + s1 * r[4][k]);
    const double dg = r[3][k] + (1.0 - 2.0 * s) * r[4][k];
    const double inner = r[1][k] + s1 * g;
    const double dinner = -g + s1 * dg;
    dy[k] = (inner + s * dinner) / seg.h;
  }
  return dy;
}

int Trajectory::direction() const {
  if (samples_.size() < 2) return 1;
  return samples_.back().t > samples_.front().t ? 1 : -1;
}

bool Trajectory::covers(double t) const {
  if (samples_.empty()) return false;
  const double lo = std::min(t_begin(), t_end());
  const double hi = std::max(t_begin(), t_end());
  return t >= lo && t <= hi;
}

std::size_t Trajectory::locate(double t) const {
  if (!covers(t)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "trajectory: t=" << t << " outside [" << t_begin() << ", " << t_end() << "]";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  // index of the last sample not beyond t along the direction of travel
  const int dir = direction();
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t, [dir](double value, const Sample& s) {
    return dir > 0 ? value < s.t : value > s.t;
  });
  std::size_t i = static_cast<std::size_t>(std::distance(samples_.begin(), it));
  i = i == 0 ? 0 : i - 1;
  return std::min(i, segments_.empty() ? 0 : segments_.size() - 1);
}

State Trajectory::value_at(double t) const {
  const std::size_t i = locate(t);
  if (segments_.empty()) return samples_.front().y;
  if (t == samples_[i].t) return samples_[i].y;
  if (t == samples_[i + 1].t) return samples_[i + 1].y;
  return evaluate_segment(segments_[i], t);
}

State Trajectory::derivative_at(double t) const {
  const std::size_t i = locate(t);
  if (segments_.empty()) return samples_.front().dy;
  return differentiate_segment(segments_[i], t);
}

Trajectory Trajectory::with_termination(Event event) const {
  Trajectory copy = *this;
  copy.termination_ = std::move(event);
  return copy;
}

Trajectory Trajectory::rescaled(double lambda, State factor) const {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "rescaled: lambda must be positive");
  // new(t) = factor * old(lambda t); d/dt picks up one factor of lambda
  Trajectory out;
  out.termination_ = termination_;
  out.tolerance_ = tolerance_;
  out.samples_.reserve(samples_.size());
  for (const auto& s : samples_) {
    out.samples_.push_back({s.t / lambda,
                            {factor[0] * s.y[0], factor[1] * s.y[1]},
                            {factor[0] * lambda * s.dy[0], factor[1] * lambda * s.dy[1]}});
  }
  out.segments_.reserve(segments_.size());
  for (const auto& seg : segments_) {
    Segment ns{seg.t0 / lambda, seg.h / lambda, {}};
    for (int j = 0; j < 5; ++j) ns.r[j] = {factor[0] * seg.r[j][0], factor[1] * seg.r[j][1]};
    out.segments_.push_back(ns);
  }
  std::visit(Overloaded{
                 [&](ZeroCrossing& e) { e.location /= lambda; },
                 [&](Escape& e) { e.location /= lambda; },
                 [](auto&) {},
             },
             out.termination_);
  return out;
}

void TrajectoryBuilder::start(double t, const State& y, const State& dy) {
  if (!samples_.empty()) throw Error(ErrorCode::InvalidArgument, "TrajectoryBuilder: already started");
  if (!std::isfinite(t) || !finite(y)) throw Error(ErrorCode::InvalidArgument, "TrajectoryBuilder: non-finite start");
  samples_.push_back({t, y, dy});
}

void TrajectoryBuilder::check_next(double t, const State& y) const {
  if (samples_.empty()) throw Error(ErrorCode::InvalidArgument, "TrajectoryBuilder: push before start");
  if (!std::isfinite(t) || !finite(y)) throw Error(ErrorCode::InvalidArgument, "TrajectoryBuilder: non-finite sample");
  if (t == samples_.back().t) throw Error(ErrorCode::InvalidArgument, "TrajectoryBuilder: repeated abscissa");
  if (samples_.size() >= 2) {
    const bool up = samples_[1].t > samples_[0].t;
    if ((t > samples_.back().t) != up) {
      throw Error(ErrorCode::InvalidArgument, "TrajectoryBuilder: abscissae not monotone");
    }
  }
}

void TrajectoryBuilder::push(double t, const State& y, const State& dy, const Trajectory::Segment& segment) {
  check_next(t, y);
  samples_.push_back({t, y, dy});
  segments_.push_back(segment);
}

void TrajectoryBuilder::push_hermite(double t, const State& y, const State& dy) {
  check_next(t, y);
  const auto& prev = samples_.back();
  const double h = t - prev.t;
  Trajectory::Segment seg{prev.t, h, {}};
  for (int k = 0; k < 2; ++k) {
    seg.r[0][k] = prev.y[k];
    seg.r[1][k] = y[k] - prev.y[k];
    seg.r[2][k] = h * prev.dy[k] - seg.r[1][k];
    seg.r[3][k] = seg.r[1][k] - h * dy[k] - seg.r[2][k];
    seg.r[4][k] = 0.0;
  }
  samples_.push_back({t, y, dy});
  segments_.push_back(seg);
}

Trajectory TrajectoryBuilder::finish(Event termination, double tolerance) && {
  if (samples_.empty()) throw Error(ErrorCode::InvalidArgument, "TrajectoryBuilder: empty trajectory");
  Trajectory out;
  out.samples_ = std::move(samples_);
  out.segments_ = std::move(segments_);
  out.termination_ = std::move(termination);
  out.tolerance_ = tolerance;
  return out;
}

}  // namespace hh
