#include "hh/hh.h"

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hh/atlas.hpp"
#include "hh/closed_forms.hpp"
#include "hh/error.hpp"
#include "hh/lienard.hpp"
#include "hh/local_family.hpp"
#include "hh/numerics.hpp"
#include "hh/radial_probe.hpp"
#include "hh/transforms.hpp"
#include "hh/verify.hpp"
#include "report.hpp"

struct hh_context {
  double tol = 1e-10;
  bool pretty = false;
  std::string last_error;
};

struct hh_document {
  std::string json;
  std::vector<std::string> artifacts;
  bool ok = true;
};

struct hh_trajectory {
  hh::Trajectory path;
  std::string termination;
};

namespace {

using hh::report::Json;

struct Artifact {
  std::string name;
  std::string text;
};

hh_status status_of(hh::ErrorCode code) { return static_cast<hh_status>(static_cast<int>(code) + 1); }

// Runs fn, translating exceptions into a status and a context message.
template <class Fn>
hh_status guard(hh_context* ctx, Fn&& fn) {
  if (!ctx) return HH_INVALID_ARGUMENT;
  ctx->last_error.clear();
  try {
    fn();
    return HH_OK;
  } catch (const hh::Error& e) {
    ctx->last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return HH_INTERNAL;
  } catch (...) {
    ctx->last_error = "unknown failure";
    return HH_INTERNAL;
  }
}

void require_out(const void* out) {
  if (!out) throw hh::Error(hh::ErrorCode::InvalidArgument, "output pointer is null");
}

hh::ProblemParams convert(const hh_params* params) {
  if (!params) throw hh::Error(hh::ErrorCode::InvalidArgument, "params pointer is null");
  if (params->domain != HH_FULL_SPACE && params->domain != HH_HALF_LINE) {
    throw hh::Error(hh::ErrorCode::InvalidArgument, "unknown domain");
  }
  return {params->n, params->p, params->sigma,
          params->domain == HH_HALF_LINE ? hh::Domain::HalfLine : hh::Domain::FullSpace};
}

// Writes every artifact or none: a failed write removes the files already
// written by this call.
std::vector<std::string> write_all(const char* out_dir, const std::vector<Artifact>& artifacts) {
  std::vector<std::string> written;
  if (!out_dir || artifacts.empty()) return written;
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw hh::Error(hh::ErrorCode::Io, "cannot create directory '" + std::string(out_dir) + "'");
  try {
    for (const auto& a : artifacts) {
      const std::string path = (fs::path(out_dir) / a.name).string();
      hh::report::write_file(path, a.text);
      written.push_back(path);
    }
  } catch (const hh::Error&) {
    for (const auto& path : written) fs::remove(path, ec);
    throw;
  }
  return written;
}

void emit(hh_context* ctx, Json body, bool ok, const char* out_dir, const std::vector<Artifact>& artifacts,
          hh_document** out) {
  Json doc = hh::report::document();
  for (auto& [key, value] : body.items()) doc[key] = std::move(value);
  auto* d = new hh_document;
  d->ok = ok;
  try {
    d->artifacts = write_all(out_dir, artifacts);
    if (!d->artifacts.empty()) {
      Json list = Json::array();
      for (const auto& a : d->artifacts) list.push_back(a);
      doc["artifacts"] = std::move(list);
    }
    d->json = hh::report::dump(doc, ctx->pretty);
  } catch (...) {
    delete d;
    throw;
  }
  *out = d;
}

std::string two_digit(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02zu", i);
  return buf;
}

Json state_json(const hh::State& s) { return Json::array({s[0], s[1]}); }

}  // namespace

extern "C" {

hh_context* hh_context_create(void) {
  try {
    return new hh_context;
  } catch (...) {
    return nullptr;
  }
}

void hh_context_destroy(hh_context* ctx) { delete ctx; }

hh_status hh_context_set_tolerance(hh_context* ctx, double tol) {
  return guard(ctx, [&] {
    if (!(tol > 0.0) || !std::isfinite(tol) || tol >= 1.0) {
      throw hh::Error(hh::ErrorCode::InvalidArgument, "tolerance must lie in (0, 1)");
    }
    ctx->tol = tol;
  });
}

double hh_context_tolerance(const hh_context* ctx) { return ctx ? ctx->tol : std::nan(""); }

void hh_context_set_pretty(hh_context* ctx, int pretty) {
  if (ctx) ctx->pretty = pretty != 0;
}

const char* hh_last_error(const hh_context* ctx) { return ctx ? ctx->last_error.c_str() : "null context"; }

const char* hh_status_string(hh_status status) {
  switch (status) {
    case HH_OK: return "OK";
    case HH_IO: return "Io";
    case HH_INTERNAL: return "Internal";
    default: break;
  }
  if (status > HH_OK && status < HH_IO) {
    return hh::to_string(static_cast<hh::ErrorCode>(static_cast<int>(status) - 1)).data();
  }
  return "Unknown";
}

const char* hh_document_json(const hh_document* doc) { return doc ? doc->json.c_str() : ""; }

size_t hh_document_artifact_count(const hh_document* doc) { return doc ? doc->artifacts.size() : 0; }

const char* hh_document_artifact(const hh_document* doc, size_t index) {
  if (!doc || index >= doc->artifacts.size()) return nullptr;
  return doc->artifacts[index].c_str();
}

int hh_document_ok(const hh_document* doc) { return doc && doc->ok ? 1 : 0; }

void hh_document_destroy(hh_document* doc) { delete doc; }

hh_status hh_classify(hh_context* ctx, const hh_params* params, hh_document** out) {
  return guard(ctx, [&] {
    require_out(out);
    const hh::ProblemParams P = convert(params);
    Json body = Json::object();
    body["params"] = hh::report::to_json(P);
    const Json verdict = hh::report::to_json(hh::classify(P));
    for (const auto& [k, v] : verdict.items()) body[k] = v;
    emit(ctx, std::move(body), true, nullptr, {}, out);
  });
}

hh_status hh_critical_exponent(hh_context* ctx, int n, double sigma, double* out) {
  return guard(ctx, [&] {
    require_out(out);
    if (n < 1 || !std::isfinite(sigma)) throw hh::Error(hh::ErrorCode::InvalidParams, "need n >= 1 and finite sigma");
    *out = hh::critical_exponent(n, sigma);
  });
}

hh_status hh_atlas_export(hh_context* ctx, const hh_params* grid, size_t count, const char* out_dir,
                          hh_document** out) {
  return guard(ctx, [&] {
    require_out(out);
    if (!grid && count > 0) throw hh::Error(hh::ErrorCode::InvalidArgument, "grid pointer is null");
    std::vector<hh::ProblemParams> points;
    points.reserve(count);
    for (size_t i = 0; i < count; ++i) points.push_back(convert(grid + i));
    const auto records = hh::atlas_export(points);
    Json rows = Json::array();
    for (const auto& r : records) {
      Json row = hh::report::to_json(r.params);
      row["exists"] = r.verdict.exists;
      row["rationale"] = r.verdict.rationale;
      rows.push_back(std::move(row));
    }
    Json file = hh::report::document();
    file["records"] = rows;
    Json body = Json::object();
    body["count"] = records.size();
    body["records"] = std::move(rows);
    emit(ctx, std::move(body), true, out_dir,
         {{"atlas.csv", hh::report::atlas_csv(records)}, {"atlas.json", hh::report::dump(file, ctx->pretty)}}, out);
  });
}

hh_status hh_kelvin(hh_context* ctx, double p, double sigma, hh_document** out) {
  return guard(ctx, [&] {
    require_out(out);
    const hh::ProblemParams P{1, p, sigma, hh::Domain::HalfLine};
    const hh::KelvinImage image = hh::kelvin(P);
    const hh::RegimeVerdict before = hh::classify(P);
    const hh::RegimeVerdict after = hh::classify(image.params);
    Json body = Json::object();
    body["params"] = hh::report::to_json(P);
    body["sigma_tilde"] = image.sigma_tilde;
    body["image"] = hh::report::to_json(image.params);
    body["verdict"] = hh::report::to_json(before);
    body["image_verdict"] = hh::report::to_json(after);
    body["invariant"] = before.exists == after.exists;
    try {
      const hh::ClosedForm w = hh::kelvin(hh::ClosedForm{hh::power_law(p, sigma)});
      Json t = hh::report::to_json(w);
      t["residual"] = hh::residual(w, image.params, hh::logspace(1e-2, 1e2, 401));
      body["transformed_power_law"] = std::move(t);
    } catch (const hh::Error&) {
      // no positive power law at these parameters
    }
    emit(ctx, std::move(body), before.exists == after.exists, nullptr, {}, out);
  });
}

hh_status hh_family(hh_context* ctx, double p, double sigma, double w0, double x_max, const char* out_dir,
                    hh_document** out) {
  return guard(ctx, [&] {
    require_out(out);
    if (!(w0 >= 0.0) || !std::isfinite(w0)) {
      throw hh::Error(hh::ErrorCode::InvalidArgument, "family: w0 must be finite and >= 0 (see below-ua)");
    }
    if (!(x_max > 0.0) || !std::isfinite(x_max)) throw hh::Error(hh::ErrorCode::InvalidArgument, "family: x_max must be > 0");
    const double T = std::min(0.1, x_max / 2.0);
    const hh::FamilyMember m = hh::extend_family(hh::picard_local(p, sigma, w0, T), x_max, ctx->tol);
    Json manifest = hh::report::document();
    manifest["w0"] = w0;
    manifest["mu_plus"] = m.local.mu_plus;
    manifest["T"] = m.local.T;
    manifest["slope_estimate"] = m.slope_estimate;
    Json body = Json::object();
    body["params"] = hh::report::to_json(hh::ProblemParams{1, p, sigma, hh::Domain::HalfLine});
    body["w0"] = w0;
    body["a"] = m.local.a;
    body["mu_plus"] = m.local.mu_plus;
    body["T"] = m.local.T;
    body["picard_iterations"] = m.local.iterations;
    body["picard_residual"] = m.local.residual;
    body["x_max"] = m.x_max();
    body["slope_estimate"] = m.slope_estimate;
    body["termination"] = hh::report::to_json(m.tail.termination());
    Json checks = Json::object();
    checks["above_ua"] = m.above_ua;
    checks["du_nonincreasing"] = m.du_nonincreasing;
    checks["u_nondecreasing"] = m.u_nondecreasing;
    checks["violations"] = m.violations;
    body["invariants"] = std::move(checks);
    emit(ctx, std::move(body), m.violations == 0, out_dir,
         {{"family.csv", hh::report::family_csv(m)}, {"manifest.json", hh::report::dump(manifest, ctx->pretty)}}, out);
  });
}

hh_status hh_below_ua(hh_context* ctx, double p, double sigma, double w0, double x_max, const char* out_dir,
                      hh_document** out) {
  return guard(ctx, [&] {
    require_out(out);
    const hh::BelowUaReport r = hh::below_ua_experiment(p, sigma, w0, x_max, ctx->tol);
    Json body = Json::object();
    body["params"] = hh::report::to_json(hh::ProblemParams{1, p, sigma, hh::Domain::HalfLine});
    body["w0"] = w0;
    body["failed"] = r.failed;
    body["certificate"] = hh::to_string(r.kind);
    body["x_star"] = r.x_star;
    body["x_max_used"] = r.x_max_used;
    body["retries"] = r.retries;
    std::vector<Artifact> artifacts;
    if (!r.tail.empty()) artifacts.push_back({"below_ua.csv", hh::report::trajectory_csv(r.tail, "x,u,du")});
    // a negative w0 without a certificate contradicts the expected obstruction
    emit(ctx, std::move(body), w0 == 0.0 || r.failed, out_dir, artifacts, out);
  });
}

hh_status hh_lienard_a(hh_context* ctx, double p, double sigma, double* a) {
  return guard(ctx, [&] {
    require_out(a);
    *a = hh::lienard_from_params(p, sigma).a;
  });
}

hh_status hh_orbit(hh_context* ctx, double a, double p, double V0, double Vdot0, double z0, double z1,
                   const char* out_dir, hh_document** out) {
  return guard(ctx, [&] {
    require_out(out);
    const hh::LienardSystem sys = hh::make_lienard(a, p);
    const hh::Trajectory orbit = hh::integrate_orbit(sys, {V0, Vdot0}, z0, z1, ctx->tol);
    Json body = Json::object();
    body["a"] = a;
    body["p"] = p;
    body["initial"] = state_json({V0, Vdot0});
    body["z_span"] = Json::array({z0, z1});
    body["samples"] = orbit.size();
    body["final"] = state_json(orbit.back().y);
    body["z_end"] = orbit.t_end();
    body["termination"] = hh::report::to_json(orbit.termination());
    try {
      const double E0 = hh::energy(sys, orbit.front().y);
      double drift = 0.0;
      for (const auto& s : orbit.samples()) drift = std::max(drift, std::abs(hh::energy(sys, s.y) - E0));
      body["energy_initial"] = E0;
      body["energy_max_deviation"] = drift;
    } catch (const hh::Error&) {
      // energy undefined on part of the orbit
    }
    try {
      // the mirrored backward span supplies the alpha-limit
      std::optional<hh::Trajectory> back;
      try {
        back = hh::integrate_orbit(sys, {V0, Vdot0}, z0, z0 - (z1 - z0), ctx->tol);
      } catch (const hh::Error&) {
      }
      body["class"] = hh::report::to_json(hh::classify_orbit(sys, orbit, back ? &*back : nullptr));
    } catch (const hh::Error& e) {
      body["class"] = Json::object({{"kind", "Inconclusive"}, {"reason", e.what()}});
    }
    emit(ctx, std::move(body), true, out_dir, {{"orbit.csv", hh::report::orbit_csv(sys, orbit)}}, out);
  });
}

hh_status hh_portrait(hh_context* ctx, double a, double p, double z_span, const char* out_dir, hh_document** out) {
  return guard(ctx, [&] {
    require_out(out);
    const hh::LienardSystem sys = hh::make_lienard(a, p);
    const hh::Portrait pt = hh::portrait(sys, hh::default_seeds(sys), z_span, ctx->tol);
    Json seeds = Json::array();
    Json classes = Json::array();
    std::vector<Artifact> artifacts;
    for (std::size_t i = 0; i < pt.entries.size(); ++i) {
      const auto& e = pt.entries[i];
      seeds.push_back(state_json(e.seed));
      if (e.orbit) {
        classes.push_back(hh::report::to_json(*e.orbit));
      } else {
        classes.push_back(Json::object({{"kind", "Inconclusive"}, {"reason", e.error}}));
      }
      if (e.forward) artifacts.push_back({"seed_" + two_digit(i) + ".csv", hh::report::orbit_csv(sys, *e.forward)});
    }
    Json disc = Json::object();
    disc["value"] = pt.discriminant;
    disc["sign"] = pt.discriminant_sign;
    disc["p_threshold"] = pt.p_threshold;
    disc["p_vs_threshold"] = pt.p_vs_threshold;
    disc["regime"] = pt.regime;
    Json manifest = hh::report::document();
    manifest["a"] = a;
    manifest["p"] = p;
    manifest["z_span"] = z_span;
    manifest["seeds"] = seeds;
    manifest["classes"] = classes;
    manifest["discriminant"] = disc;
    artifacts.push_back({"manifest.json", hh::report::dump(manifest, ctx->pretty)});
    Json body = Json::object();
    body["a"] = a;
    body["p"] = p;
    body["z_span"] = z_span;
    body["seeds"] = std::move(seeds);
    body["classes"] = std::move(classes);
    body["discriminant"] = std::move(disc);
    emit(ctx, std::move(body), true, out_dir, artifacts, out);
  });
}

hh_status hh_shoot(hh_context* ctx, const hh_params* params, double u0, double slope0, double r_max,
                   const char* out_dir, hh_document** out) {
  return guard(ctx, [&] {
    require_out(out);
    const hh::ShotOutcome shot = hh::shoot(convert(params), u0, slope0, r_max, ctx->tol);
    const hh::MonotoneReport m = hh::monotone_diagnostics(shot);
    Json body = Json::object();
    body["params"] = hh::report::to_json(shot.params);
    body["u0"] = u0;
    body["slope0"] = slope0;
    body["r0"] = shot.r0;
    body["r_max"] = r_max;
    body["fate"] = hh::report::to_json(shot.fate);
    body["termination"] = hh::report::to_json(shot.trajectory.termination());
    Json diag = Json::object();
    diag["u_nonincreasing"] = m.u_nonincreasing;
    diag["flux_nonincreasing"] = m.flux_nonincreasing;
    diag["flux_nonpositive"] = m.flux_nonpositive;
    diag["bounded_by_u0"] = m.bounded_by_u0;
    body["diagnostics"] = std::move(diag);
    emit(ctx, std::move(body), m.all(), out_dir, {{"shot.csv", hh::report::trajectory_csv(shot.trajectory, "r,u,du")}},
         out);
  });
}

hh_status hh_scan(hh_context* ctx, const hh_params* params, const double* u0s, size_t u0_count, const double* slopes,
                  size_t slope_count, double r_max, const char* out_dir, hh_document** out) {
  return guard(ctx, [&] {
    require_out(out);
    if ((!u0s && u0_count) || (!slopes && slope_count)) {
      throw hh::Error(hh::ErrorCode::InvalidArgument, "scan: null shot grid");
    }
    const hh::ScanReport rep = hh::nonexistence_scan(convert(params), std::vector<double>(u0s, u0s + u0_count),
                                                     std::vector<double>(slopes, slopes + slope_count), r_max, ctx->tol);
    Json shots = Json::array();
    for (const auto& s : rep.shots) {
      Json item = Json::object();
      item["u0"] = s.u0;
      item["slope0"] = s.slope0;
      item["fate"] = hh::to_string(s.fate.kind);
      item["r*"] = s.fate.r;
      shots.push_back(std::move(item));
    }
    Json alerts = Json::array();
    for (std::size_t i : rep.red_alerts) alerts.push_back(i);
    Json body = Json::object();
    body["params"] = hh::report::to_json(rep.params);
    body["r_max"] = rep.r_max;
    body["shots"] = std::move(shots);
    body["red_alerts"] = std::move(alerts);
    Json file = hh::report::document();
    for (const auto& [k, v] : body.items()) file[k] = v;
    std::vector<Artifact> artifacts{{"scan.json", hh::report::dump(file, ctx->pretty)}};
    for (std::size_t k = 0; k < rep.red_alert_dumps.size(); ++k) {
      artifacts.push_back({"red_alert_" + two_digit(k) + ".csv", hh::report::trajectory_csv(rep.red_alert_dumps[k], "r,u,du")});
    }
    emit(ctx, std::move(body), rep.red_alerts.empty(), out_dir, artifacts, out);
  });
}

hh_status hh_verify(hh_context* ctx, const char* suite, double tolerance_scale, hh_document** out) {
  return guard(ctx, [&] {
    require_out(out);
    if (!suite) throw hh::Error(hh::ErrorCode::InvalidArgument, "suite is null");
    const hh::VerifyReport rep = hh::run_verify(suite, ctx->tol, tolerance_scale);
    emit(ctx, hh::report::to_json(rep), rep.failed() == 0, nullptr, {}, out);
  });
}

hh_status hh_lienard_orbit(hh_context* ctx, double a, double p, double V0, double Vdot0, double z0, double z1,
                           hh_trajectory** out) {
  return guard(ctx, [&] {
    require_out(out);
    auto* t = new hh_trajectory;
    try {
      t->path = hh::integrate_orbit(hh::make_lienard(a, p), {V0, Vdot0}, z0, z1, ctx->tol);
      t->termination = hh::report::dump(hh::report::to_json(t->path.termination()), false);
      t->termination.pop_back();
    } catch (...) {
      delete t;
      throw;
    }
    *out = t;
  });
}

size_t hh_trajectory_size(const hh_trajectory* traj) { return traj ? traj->path.size() : 0; }

hh_status hh_trajectory_sample(const hh_trajectory* traj, size_t index, double* t, double* y, double* dy) {
  if (!traj || index >= traj->path.size()) return HH_INVALID_ARGUMENT;
  const auto& s = traj->path.samples()[index];
  if (t) *t = s.t;
  if (y) y[0] = s.y[0], y[1] = s.y[1];
  if (dy) dy[0] = s.dy[0], dy[1] = s.dy[1];
  return HH_OK;
}

hh_status hh_trajectory_eval(const hh_trajectory* traj, double t, double* y, double* dy) {
  if (!traj || !traj->path.covers(t)) return HH_INVALID_ARGUMENT;
  try {
    const hh::State v = traj->path.value_at(t);
    const hh::State d = traj->path.derivative_at(t);
    if (y) y[0] = v[0], y[1] = v[1];
    if (dy) dy[0] = d[0], dy[1] = d[1];
    return HH_OK;
  } catch (const hh::Error& e) {
    return status_of(e.code());
  }
}

const char* hh_trajectory_termination(const hh_trajectory* traj) { return traj ? traj->termination.c_str() : ""; }

hh_status hh_trajectory_write_csv(const hh_trajectory* traj, const char* path) {
  if (!traj || !path) return HH_INVALID_ARGUMENT;
  try {
    hh::report::write_file(path, hh::report::trajectory_csv(traj->path, "t,y,dy"));
    return HH_OK;
  } catch (const hh::Error& e) {
    return status_of(e.code());
  }
}

void hh_trajectory_destroy(hh_trajectory* traj) { delete traj; }

}  // extern "C"
