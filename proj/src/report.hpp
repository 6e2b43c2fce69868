#pragma once

// JSON and CSV serialisation shared by the C API and the verify suites.

#include <json.hpp>
#include <string>
#include <vector>

#include "hh/atlas.hpp"
#include "hh/closed_forms.hpp"
#include "hh/lienard.hpp"
#include "hh/local_family.hpp"
#include "hh/radial_probe.hpp"
#include "hh/trajectory.hpp"
#include "hh/verify.hpp"

namespace hh::report {

using Json = nlohmann::ordered_json;

/// Serialises with every double at 17 significant digits; non-finite values
/// become the strings "inf", "-inf", "nan".
std::string dump(const Json& doc, bool pretty);

Json document();  // {"schema_version": 1}

Json to_json(const ProblemParams& params);
Json to_json(const ClosedForm& form);
Json to_json(const RegimeVerdict& verdict);
Json to_json(const Event& event);
Json to_json(const OrbitClass& orbit);
Json to_json(const RootPair& roots);
Json to_json(const Fate& fate);
/// {suite, tolerance, tolerance_scale, passed, failed, checks, findings}
Json to_json(const VerifyReport& report);

std::string format_number(double v);

std::string atlas_csv(const std::vector<AtlasRecord>& records);
std::string closed_form_csv(const ClosedForm& form, const std::vector<double>& grid);
/// z,V,Vdot,E
std::string orbit_csv(const LienardSystem& sys, const Trajectory& orbit);
/// x,u,du: every 2^k-th Picard grid point, then the continuation samples
std::string family_csv(const FamilyMember& member);
/// t,y,dy with caller-supplied column names
std::string trajectory_csv(const Trajectory& trajectory, const std::string& header);

/// Writes text to path; Io on failure.
void write_file(const std::string& path, const std::string& text);

}  // namespace hh::report
