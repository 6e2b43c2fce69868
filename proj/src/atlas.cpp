#include "hh/atlas.hpp"

#include <array>
#include <limits>

#include "hh/error.hpp"

namespace hh {

namespace {

constexpr std::array<std::string_view, 41> kTags = {
    "T1.n2.p_lt_0",
    "T1.n2.p_eq_0",
    "T1.n2.p_in_(0,1]",
    "T1.n2.p_gt_1.sigma_gt_-2",
    "T1.n2.p_gt_1.sigma_le_-2",
    "T1.p_lt_0",
    "T1.p_eq_0",
    "T1.p_in_(0,1]",
    "T1.p_gt_1.sigma_le_-2",
    "T1.subcritical",
    "T1.supercritical",
    "T2.sigma_lt_-2.p_le_0",
    "T2.sigma_lt_-2.p_in_(0,1)",
    "T2.sigma_lt_-2.p_in_[1,-1-sigma]",
    "T2.sigma_lt_-2.p_gt_-1-sigma",
    "T2.sigma_eq_-2.p_le_0",
    "T2.sigma_eq_-2.p_in_(0,1)",
    "T2.sigma_eq_-2.p_ge_1",
    "T2.sigma_in_(-2,-1).p_lt_-1-sigma",
    "T2.sigma_in_(-2,-1).p_in_[-1-sigma,1)",
    "T2.sigma_in_(-2,-1).p_ge_1",
    "T2.sigma_in_[-1,0).p_lt_-1-sigma",
    "T2.sigma_in_[-1,0).p_in_[-1-sigma,0]",
    "T2.sigma_in_[-1,0).p_in_(0,1)",
    "T2.sigma_in_[-1,0).p_ge_1",
    "T2.sigma_ge_0.p_lt_1",
    "T2.sigma_ge_0.p_ge_1",
    "T3.sigma_lt_-2.p_le_0",
    "T3.sigma_lt_-2.p_in_(0,1)",
    "T3.sigma_lt_-2.p_in_[1,-1-sigma]",
    "T3.sigma_lt_-2.p_gt_-1-sigma",
    "T3.sigma_eq_-2.p_le_0",
    "T3.sigma_eq_-2.p_in_(0,1)",
    "T3.sigma_eq_-2.p_ge_1",
    "T3.sigma_in_(-2,-1).p_lt_-1-sigma",
    "T3.sigma_in_(-2,-1).p_in_[-1-sigma,1)",
    "T3.sigma_in_(-2,-1).p_ge_1",
    "T3.sigma_ge_-1.p_lt_-1-sigma",
    "T3.sigma_ge_-1.p_in_[-1-sigma,0]",
    "T3.sigma_ge_-1.p_in_(0,1)",
    "T3.sigma_ge_-1.p_ge_1",
};

RegimeVerdict no(std::string tag) { return {false, std::nullopt, std::move(tag)}; }

RegimeVerdict yes_power_law(const ProblemParams& params, std::string tag) {
  RegimeVerdict v{true, std::nullopt, std::move(tag)};
  try {
    v.witness = power_law(params.p, params.sigma);
  } catch (const Error&) {
    // a rounds onto {0, 1} only within an ulp of a table boundary
  }
  return v;
}

RegimeVerdict classify_higher(const ProblemParams& P) {
  const double p = P.p, s = P.sigma;
  if (P.n == 2) {
    if (p < 0.0) return no("T1.n2.p_lt_0");
    if (p == 0.0) return no("T1.n2.p_eq_0");
    if (p <= 1.0) return no("T1.n2.p_in_(0,1]");
    return no(s > -2.0 ? "T1.n2.p_gt_1.sigma_gt_-2" : "T1.n2.p_gt_1.sigma_le_-2");
  }
  if (p < 0.0) return no("T1.p_lt_0");
  if (p == 0.0) return no("T1.p_eq_0");
  if (p <= 1.0) return no("T1.p_in_(0,1]");
  if (s <= -2.0) return no("T1.p_gt_1.sigma_le_-2");
  if (p >= critical_exponent(P.n, s)) {
    RegimeVerdict v{true, std::nullopt, "T1.supercritical"};
    if (s == 0.0 && p == critical_exponent(P.n, 0.0)) v.witness = bubble(P.n);
    return v;
  }
  return no("T1.subcritical");
}

RegimeVerdict classify_line(const ProblemParams& P) {
  const double p = P.p, s = P.sigma;
  const double q = -1.0 - s;
  const std::string t = P.domain == Domain::HalfLine ? "T3." : "T2.";
  if (s < -2.0) {
    const std::string row = t + "sigma_lt_-2.";
    if (p <= 0.0) return no(row + "p_le_0");
    if (p < 1.0) return no(row + "p_in_(0,1)");
    if (p <= q) return no(row + "p_in_[1,-1-sigma]");
    return yes_power_law(P, row + "p_gt_-1-sigma");
  }
  if (s == -2.0) {
    const std::string row = t + "sigma_eq_-2.";
    if (p <= 0.0) return no(row + "p_le_0");
    if (p < 1.0) return no(row + "p_in_(0,1)");
    return no(row + "p_ge_1");
  }
  if (s < -1.0) {
    const std::string row = t + "sigma_in_(-2,-1).";
    if (p < q) return yes_power_law(P, row + "p_lt_-1-sigma");
    if (p < 1.0) return no(row + "p_in_[-1-sigma,1)");
    return no(row + "p_ge_1");
  }
  if (P.domain == Domain::FullSpace && s >= 0.0) {
    const std::string row = t + "sigma_ge_0.";
    return no(row + (p < 1.0 ? "p_lt_1" : "p_ge_1"));
  }
  const std::string row = t + (P.domain == Domain::HalfLine ? "sigma_ge_-1." : "sigma_in_[-1,0).");
  if (p < q) return yes_power_law(P, row + "p_lt_-1-sigma");
  if (p <= 0.0) return no(row + "p_in_[-1-sigma,0]");
  if (p < 1.0) return no(row + "p_in_(0,1)");
  return no(row + "p_ge_1");
}

}  // namespace

double critical_exponent(int n, double sigma) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "critical_exponent: n must be >= 1");
  if (n <= 2) return std::numeric_limits<double>::infinity();
  return (n + 2 + 2.0 * sigma) / (n - 2);
}

RegimeVerdict classify(const ProblemParams& params) {
  validate(params);
  return params.n >= 2 ? classify_higher(params) : classify_line(params);
}

std::span<const std::string_view> rationale_tags() { return kTags; }

std::vector<AtlasRecord> atlas_export(std::span<const ProblemParams> grid) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "atlas_export: empty grid");
  std::vector<AtlasRecord> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      out.push_back({grid[i], classify(grid[i])});
    } catch (const Error& e) {
      throw Error(e.code(), "row " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace hh
