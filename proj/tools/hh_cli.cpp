// Command-line front end over the C interface.
//
// Exit codes: 0 success, 1 finding or computational failure (JSON still on
// stdout), 2 invalid input (message on stderr, nothing written).

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

#include "hh/hh.h"

namespace {

constexpr int kOk = 0;
constexpr int kFinding = 1;
constexpr int kInvalid = 2;

bool is_input_error(hh_status s) {
  switch (s) {
    case HH_NO_CONVERGENCE:
    case HH_STEP_SIZE_UNDERFLOW:
    case HH_NON_FINITE_FIELD:
    case HH_STEP_LIMIT_EXCEEDED:
    case HH_INCONCLUSIVE:
    case HH_LOST_POSITIVITY:
    case HH_INTERNAL:
      return false;
    default:
      return true;
  }
}

class Session {
 public:
  Session() : ctx_(hh_context_create()) {}
  ~Session() { hh_context_destroy(ctx_); }
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  hh_context* ctx() { return ctx_; }

  // Prints the document or the failure and returns the exit code.
  int finish(hh_status status, hh_document** slot) {
    if (status != HH_OK) return fail(status, hh_last_error(ctx_));
    hh_document* doc = *slot;
    std::fputs(hh_document_json(doc), stdout);
    const int code = hh_document_ok(doc) ? kOk : kFinding;
    hh_document_destroy(doc);
    return code;
  }

  int fail(hh_status status, const std::string& message) {
    if (is_input_error(status)) {
      std::fprintf(stderr, "error: %s: %s\n", hh_status_string(status), message.c_str());
      return kInvalid;
    }
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["error"] = {{"status", hh_status_string(status)}, {"message", message}};
    std::printf("%s\n", j.dump().c_str());
    return kFinding;
  }

 private:
  hh_context* ctx_;
};

hh_domain parse_domain(const std::string& text) { return text == "half" ? HH_HALF_LINE : HH_FULL_SPACE; }

const char* out_or_null(const std::string& dir) { return dir.empty() ? nullptr : dir.c_str(); }

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return v;
}

std::vector<double> logspace(double lo, double hi, int count) {
  std::vector<double> v;
  for (double e : linspace(std::log10(lo), std::log10(hi), count)) v.push_back(std::pow(10.0, e));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardy-Henon toolkit: existence atlas, closed forms, phase plane, local family, radial shots"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI/TOML file with [subcommand] sections of defaults");
  app.option_defaults()->always_capture_default();

  double tol = 1e-10;
  bool pretty = false;
  auto* tol_opt = app.add_option("--tol", tol, "Integration tolerance (default 1e-10, env HH_TOL)")
                      ->check(CLI::PositiveNumber);
  app.add_flag("--pretty", pretty, "Indented JSON");

  const CLI::Validator domain_check = CLI::IsMember({"full", "half"});
  std::function<int(Session&)> action;

  // classify
  int c_n = 0;
  double c_p = 0, c_sigma = 0;
  std::string c_domain = "full";
  auto* classify = app.add_subcommand("classify", "Existence verdict for (n, p, sigma)");
  classify->add_option("--n", c_n)->required();
  classify->add_option("--p", c_p)->required();
  classify->add_option("--sigma", c_sigma)->required();
  classify->add_option("--domain", c_domain)->check(domain_check);
  classify->callback([&] {
    action = [&](Session& s) {
      hh_params prm{c_n, c_p, c_sigma, parse_domain(c_domain)};
      hh_document* doc = nullptr;
      return s.finish(hh_classify(s.ctx(), &prm, &doc), &doc);
    };
  });

  // family
  double f_sigma = 0, f_p = 0, f_w0 = 0, f_xmax = 100;
  std::string f_out;
  auto* family = app.add_subcommand("family", "Local family member continued to x_max");
  family->add_option("--sigma", f_sigma)->required();
  family->add_option("--p", f_p)->required();
  family->add_option("--w0", f_w0)->required();
  family->add_option("--xmax", f_xmax);
  family->add_option("--out", f_out, "Directory for family.csv and manifest.json");
  family->callback([&] {
    action = [&](Session& s) {
      hh_document* doc = nullptr;
      return s.finish(hh_family(s.ctx(), f_p, f_sigma, f_w0, f_xmax, out_or_null(f_out), &doc), &doc);
    };
  });

  // below-ua
  double b_sigma = 0, b_p = 0, b_w0 = 0, b_xmax = 1000;
  std::string b_out;
  auto* below = app.add_subcommand("below-ua", "Continue a member with w0 < 0 until positivity fails");
  below->add_option("--sigma", b_sigma)->required();
  below->add_option("--p", b_p)->required();
  below->add_option("--w0", b_w0)->required();
  below->add_option("--xmax", b_xmax);
  below->add_option("--out", b_out);
  below->callback([&] {
    action = [&](Session& s) {
      hh_document* doc = nullptr;
      return s.finish(hh_below_ua(s.ctx(), b_p, b_sigma, b_w0, b_xmax, out_or_null(b_out), &doc), &doc);
    };
  });

  // verify
  std::string v_suite;
  double v_scale = 1.0;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", v_suite)->required();
  verify->add_option("--tolerance-scale", v_scale, "Multiplies every check threshold");
  verify->callback([&] {
    action = [&](Session& s) {
      hh_document* doc = nullptr;
      return s.finish(hh_verify(s.ctx(), v_suite.c_str(), v_scale, &doc), &doc);
    };
  });

  // orbit and portrait take either a directly or sigma
  double o_a = 0, o_sigma = 0, o_p = 0, o_v0 = 0, o_vd0 = 0, o_z0 = 0, o_z1 = 40;
  std::string o_out;
  auto* orbit = app.add_subcommand("orbit", "Integrate and classify one phase-plane orbit");
  auto* o_a_opt = orbit->add_option("--a", o_a, "a in (0, 1)");
  auto* o_s_opt = orbit->add_option("--sigma", o_sigma, "derive a = (2+sigma)/(1-p)");
  o_a_opt->excludes(o_s_opt);
  orbit->add_option("--p", o_p)->required();
  orbit->add_option("--v0", o_v0)->required();
  orbit->add_option("--vdot0", o_vd0);
  orbit->add_option("--z0", o_z0);
  orbit->add_option("--z1", o_z1);
  orbit->add_option("--out", o_out, "Directory for orbit.csv");

  double pt_a = 0, pt_sigma = 0, pt_p = 0, pt_span = 40;
  std::string pt_out;
  auto* portrait = app.add_subcommand("portrait", "Classify the default seed grid");
  auto* pt_a_opt = portrait->add_option("--a", pt_a);
  auto* pt_s_opt = portrait->add_option("--sigma", pt_sigma);
  pt_a_opt->excludes(pt_s_opt);
  portrait->add_option("--p", pt_p)->required();
  portrait->add_option("--z-span", pt_span);
  portrait->add_option("--out", pt_out, "Directory for seed CSVs and manifest.json");

  // resolves a from --a or --sigma; returns false after reporting an error
  auto resolve_a = [](Session& s, CLI::Option* a_opt, CLI::Option* s_opt, double a, double sigma, double p,
                      double& out, int& code) {
    if (a_opt->count() > 0) {
      out = a;
      return true;
    }
    if (s_opt->count() == 0) {
      code = s.fail(HH_INVALID_ARGUMENT, "one of --a or --sigma is required");
      return false;
    }
    const hh_status st = hh_lienard_a(s.ctx(), p, sigma, &out);
    if (st != HH_OK) {
      code = s.fail(st, hh_last_error(s.ctx()));
      return false;
    }
    return true;
  };
  orbit->callback([&] {
    action = [&](Session& s) {
      double a = 0;
      int code = 0;
      if (!resolve_a(s, o_a_opt, o_s_opt, o_a, o_sigma, o_p, a, code)) return code;
      hh_document* doc = nullptr;
      return s.finish(hh_orbit(s.ctx(), a, o_p, o_v0, o_vd0, o_z0, o_z1, out_or_null(o_out), &doc), &doc);
    };
  });
  portrait->callback([&] {
    action = [&](Session& s) {
      double a = 0;
      int code = 0;
      if (!resolve_a(s, pt_a_opt, pt_s_opt, pt_a, pt_sigma, pt_p, a, code)) return code;
      hh_document* doc = nullptr;
      return s.finish(hh_portrait(s.ctx(), a, pt_p, pt_span, out_or_null(pt_out), &doc), &doc);
    };
  });

  // kelvin
  double k_sigma = 0, k_p = 0;
  auto* kelvin = app.add_subcommand("kelvin", "Kelvin image of a half-line problem");
  kelvin->add_option("--sigma", k_sigma)->required();
  kelvin->add_option("--p", k_p)->required();
  kelvin->callback([&] {
    action = [&](Session& s) {
      hh_document* doc = nullptr;
      return s.finish(hh_kelvin(s.ctx(), k_p, k_sigma, &doc), &doc);
    };
  });

  // shoot
  int s_n = 0;
  double s_p = 0, s_sigma = 0, s_u0 = 1, s_slope = 0, s_rmax = 1e3;
  std::string s_out;
  auto* shoot = app.add_subcommand("shoot", "One radial shot from the origin");
  shoot->add_option("--n", s_n)->required();
  shoot->add_option("--p", s_p)->required();
  shoot->add_option("--sigma", s_sigma)->required();
  shoot->add_option("--u0", s_u0)->required();
  shoot->add_option("--slope0", s_slope);
  shoot->add_option("--rmax", s_rmax);
  shoot->add_option("--out", s_out, "Directory for shot.csv");
  shoot->callback([&] {
    action = [&](Session& s) {
      hh_params prm{s_n, s_p, s_sigma, HH_FULL_SPACE};
      hh_document* doc = nullptr;
      return s.finish(hh_shoot(s.ctx(), &prm, s_u0, s_slope, s_rmax, out_or_null(s_out), &doc), &doc);
    };
  });

  // scan
  int sc_n = 0, sc_count = 25;
  double sc_p = 0, sc_sigma = 0, sc_lo = 0.1, sc_hi = 10, sc_rmax = 1e3;
  std::vector<double> sc_slopes{0.0};
  std::string sc_out;
  auto* scan = app.add_subcommand("scan", "Non-existence scan over log-spaced u0");
  scan->add_option("--n", sc_n)->required();
  scan->add_option("--p", sc_p)->required();
  scan->add_option("--sigma", sc_sigma)->required();
  scan->add_option("--u0-min", sc_lo)->check(CLI::PositiveNumber);
  scan->add_option("--u0-max", sc_hi)->check(CLI::PositiveNumber);
  scan->add_option("--count", sc_count)->check(CLI::Range(1, 100000));
  scan->add_option("--slopes", sc_slopes)->delimiter(',');
  scan->add_option("--rmax", sc_rmax);
  scan->add_option("--out", sc_out, "Directory for scan.json and red-alert CSVs");
  scan->callback([&] {
    action = [&](Session& s) {
      hh_params prm{sc_n, sc_p, sc_sigma, HH_FULL_SPACE};
      const std::vector<double> u0s = logspace(sc_lo, sc_hi, sc_count);
      hh_document* doc = nullptr;
      return s.finish(hh_scan(s.ctx(), &prm, u0s.data(), u0s.size(), sc_slopes.data(), sc_slopes.size(), sc_rmax,
                              out_or_null(sc_out), &doc),
                      &doc);
    };
  });

  // atlas-export
  std::vector<int> a_ns{1};
  std::string a_domain = "full";
  double a_pmin = -10, a_pmax = 10, a_smin = -6, a_smax = 6;
  int a_psteps = 41, a_ssteps = 25;
  std::string a_out;
  auto* atlas = app.add_subcommand("atlas-export", "Decision table over a (p, sigma) grid");
  atlas->add_option("--n", a_ns)->delimiter(',');
  atlas->add_option("--domain", a_domain)->check(domain_check);
  atlas->add_option("--p-min", a_pmin);
  atlas->add_option("--p-max", a_pmax);
  atlas->add_option("--p-steps", a_psteps)->check(CLI::Range(1, 100000));
  atlas->add_option("--sigma-min", a_smin);
  atlas->add_option("--sigma-max", a_smax);
  atlas->add_option("--sigma-steps", a_ssteps)->check(CLI::Range(1, 100000));
  atlas->add_option("--out", a_out, "Directory for atlas.csv and atlas.json");
  atlas->callback([&] {
    action = [&](Session& s) {
      std::vector<hh_params> grid;
      for (int n : a_ns) {
        for (double p : linspace(a_pmin, a_pmax, a_psteps)) {
          for (double sigma : linspace(a_smin, a_smax, a_ssteps)) grid.push_back({n, p, sigma, parse_domain(a_domain)});
        }
      }
      hh_document* doc = nullptr;
      return s.finish(hh_atlas_export(s.ctx(), grid.data(), grid.size(), out_or_null(a_out), &doc), &doc);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  // precedence: flag > config file > HH_TOL > default
  if (tol_opt->count() == 0) {
    if (const char* env = std::getenv("HH_TOL"); env && *env) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (*end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
        std::fprintf(stderr, "error: HH_TOL='%s' is not a positive number\n", env);
        return kInvalid;
      }
      tol = v;
    }
  }

  Session session;
  if (!session.ctx()) {
    std::fprintf(stderr, "error: cannot allocate context\n");
    return kFinding;
  }
  if (hh_context_set_tolerance(session.ctx(), tol) != HH_OK) {
    return session.fail(HH_INVALID_ARGUMENT, hh_last_error(session.ctx()));
  }
  hh_context_set_pretty(session.ctx(), pretty ? 1 : 0);
  return action(session);
}
