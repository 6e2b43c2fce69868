#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hh/error.hpp"

namespace hh::report {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void write(const Json& j, bool pretty, int depth, std::string& out) {
  const std::string pad = pretty ? std::string(2 * (depth + 1), ' ') : "";
  const std::string close_pad = pretty ? std::string(2 * depth, ' ') : "";
  const char* nl = pretty ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        out += Json(key).dump();
        out += pretty ? ": " : ":";
        write(value, pretty, depth + 1, out);
      }
      out += nl;
      out += close_pad;
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      out += nl;
      bool first = true;
      for (const auto& value : j) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        write(value, pretty, depth + 1, out);
      }
      out += nl;
      out += close_pad;
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_number(v) : "\"" + format_number(v) + "\"";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump(const Json& doc, bool pretty) {
  std::string out;
  write(doc, pretty, 0, out);
  out += "\n";
  return out;
}

Json document() {
  Json j = Json::object();
  j["schema_version"] = 1;
  return j;
}

Json to_json(const ProblemParams& params) {
  Json j = Json::object();
  j["n"] = params.n;
  j["p"] = params.p;
  j["sigma"] = params.sigma;
  j["domain"] = std::string(to_string(params.domain));
  return j;
}

Json to_json(const ClosedForm& form) {
  Json j = Json::object();
  j["variant"] = variant_name(form);
  Json par = Json::object();
  std::visit(Overloaded{
                 [&](const PowerLaw& f) {
                   par["C"] = f.C;
                   par["a"] = f.a;
                 },
                 [&](const PowerProduct& f) {
                   par["C"] = f.C;
                   par["a"] = f.a;
                   par["alpha"] = f.alpha;
                   par["b"] = f.b;
                 },
                 [&](const CauchyEuler& f) {
                   par["c1"] = f.c1;
                   par["c2"] = f.c2;
                 },
                 [&](const Bubble& f) {
                   par["n"] = f.n;
                   par["lambda"] = f.lambda;
                 },
             },
             form);
  j["parameters"] = par;
  return j;
}

Json to_json(const RegimeVerdict& verdict) {
  Json j = Json::object();
  j["exists"] = verdict.exists;
  if (verdict.witness) j["witness"] = to_json(*verdict.witness);
  j["rationale"] = verdict.rationale;
  return j;
}

Json to_json(const Event& event) {
  Json j = Json::object();
  std::visit(Overloaded{
                 [&](const ZeroCrossing& e) {
                   j["kind"] = "ZeroCrossing";
                   j["location"] = e.location;
                 },
                 [&](const Escape& e) {
                   j["kind"] = "Escape";
                   j["threshold"] = e.threshold;
                   j["location"] = e.location;
                 },
                 [&](const ConvergedToEquilibrium& e) {
                   j["kind"] = "ConvergedToEquilibrium";
                   j["equilibrium"] = e.label;
                   j["residual"] = e.residual;
                 },
                 [&](const ReachedSpanEnd&) { j["kind"] = "ReachedSpanEnd"; },
             },
             event);
  return j;
}

Json to_json(const OrbitClass& orbit) {
  Json j = Json::object();
  std::visit(Overloaded{
                 [&](const Heteroclinic& o) {
                   j["kind"] = "Heteroclinic";
                   j["from"] = to_string(o.from);
                   j["to"] = to_string(o.to);
                 },
                 [&](const Homoclinic& o) {
                   j["kind"] = "Homoclinic";
                   j["at"] = to_string(o.at);
                 },
                 [&](const Periodic& o) {
                   j["kind"] = "Periodic";
                   j["period"] = o.period;
                   j["closure"] = o.closure;
                 },
                 [&](const SignChanging& o) {
                   j["kind"] = "SignChanging";
                   j["first_zero"] = o.first_zero;
                 },
                 [&](const Unbounded&) { j["kind"] = "Unbounded"; },
                 [&](const ConvergentToOne&) { j["kind"] = "ConvergentToOne"; },
             },
             orbit);
  return j;
}

Json to_json(const RootPair& roots) {
  Json j = Json::object();
  if (const auto* r = std::get_if<RealPair>(&roots)) {
    j["kind"] = "RealPair";
    j["mu_plus"] = r->mu_plus;
    j["mu_minus"] = r->mu_minus;
  } else {
    const auto& c = std::get<ComplexPair>(roots);
    j["kind"] = "ComplexPair";
    j["real_part"] = c.real_part;
    j["imag_part"] = c.imag_part;
  }
  return j;
}

Json to_json(const Fate& fate) {
  Json j = Json::object();
  j["kind"] = to_string(fate.kind);
  j["r"] = fate.r;
  if (fate.kind == FateKind::Positive) j["min_value"] = fate.min_value;
  return j;
}

Json to_json(const VerifyReport& report) {
  Json j = Json::object();
  j["suite"] = report.suite;
  j["tolerance"] = report.tolerance;
  j["tolerance_scale"] = report.tolerance_scale;
  j["passed"] = report.passed();
  j["failed"] = report.failed();
  Json checks = Json::array();
  Json findings = Json::array();
  for (const auto& c : report.checks) {
    Json item = Json::object();
    item["suite"] = c.suite;
    item["name"] = c.name;
    item["passed"] = c.passed;
    item["value"] = c.value;
    item["threshold"] = c.threshold * report.tolerance_scale;
    item["detail"] = c.detail;
    if (!c.passed) findings.push_back(item);
    checks.push_back(std::move(item));
  }
  j["checks"] = std::move(checks);
  j["findings"] = std::move(findings);
  return j;
}

std::string atlas_csv(const std::vector<AtlasRecord>& records) {
  std::string out = "n,p,sigma,domain,exists,rationale\n";
  for (const auto& r : records) {
    out += std::to_string(r.params.n) + "," + format_number(r.params.p) + "," + format_number(r.params.sigma) + "," +
           std::string(to_string(r.params.domain)) + "," + (r.verdict.exists ? "true" : "false") + "," +
           r.verdict.rationale + "\n";
  }
  return out;
}

std::string closed_form_csv(const ClosedForm& form, const std::vector<double>& grid) {
  std::string out = "x,u,du,d2u\n";
  for (double x : grid) {
    const Jet j = evaluate(form, x);
    out += format_number(x) + "," + format_number(j.u) + "," + format_number(j.du) + "," + format_number(j.d2u) + "\n";
  }
  return out;
}

std::string orbit_csv(const LienardSystem& sys, const Trajectory& orbit) {
  std::string out = "z,V,Vdot,E\n";
  for (const auto& s : orbit.samples()) {
    double E;
    try {
      E = energy(sys, s.y);
    } catch (const Error&) {
      E = std::nan("");
    }
    out += format_number(s.t) + "," + format_number(s.y[0]) + "," + format_number(s.y[1]) + "," + format_number(E) + "\n";
  }
  return out;
}

std::string family_csv(const FamilyMember& member) {
  std::string out = "x,u,du\n";
  const auto& x = member.local.x;
  const std::size_t stride = std::max<std::size_t>(1, x.size() / 64);
  for (std::size_t i = stride - 1; i + 1 < x.size(); i += stride) {
    const State s = member.at(x[i]);
    out += format_number(x[i]) + "," + format_number(s[0]) + "," + format_number(s[1]) + "\n";
  }
  for (const auto& s : member.tail.samples()) {
    out += format_number(s.t) + "," + format_number(s.y[0]) + "," + format_number(s.y[1]) + "\n";
  }
  return out;
}

std::string trajectory_csv(const Trajectory& trajectory, const std::string& header) {
  std::string out = header + "\n";
  for (const auto& s : trajectory.samples()) {
    out += format_number(s.t) + "," + format_number(s.y[0]) + "," + format_number(s.y[1]) + "\n";
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

}  // namespace hh::report
