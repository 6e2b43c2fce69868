#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Run run(const std::vector<std::string>& args, const std::string& env = "") {
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += quote(HH_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::current_path() / "cli_out" / name;
  fs::remove_all(p);
  return p;
}

std::vector<std::vector<double>> read_csv(const fs::path& path, std::string* header) {
  std::ifstream in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::getline(in, *header);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::strtod(cell.c_str(), nullptr));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("classify examples") {
  const Run a = run({"classify", "--n", "3", "--p", "5", "--sigma", "0", "--domain", "full"});
  CHECK(a.code == 0);
  CHECK(json::parse(a.out)["exists"] == true);

  const Run b = run({"classify", "--n", "1", "--p", "-3", "--sigma", "0.5", "--domain", "half"});
  CHECK(b.code == 0);
  const json jb = json::parse(b.out);
  CHECK(jb["exists"] == true);
  CHECK(jb["witness"]["variant"] == "PowerLaw");
  CHECK(jb["schema_version"] == 1);

  CHECK(run({"classify", "--n", "0", "--p", "5", "--sigma", "0", "--domain", "full"}).code == 2);
  CHECK(run({"classify", "--n", "3", "--p", "five", "--sigma", "0"}).code == 2);
  CHECK(run({"classify", "--n", "3", "--p", "5", "--sigma", "0", "--domain", "sideways"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("family writes a csv matching the closed form") {
  const fs::path dir = fresh_dir("family");
  const Run r = run({"family", "--sigma", "1", "--p", "-4", "--w0", "0.4", "--xmax", "100", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["artifacts"].size() == 2);
  std::string header;
  const auto rows = read_csv(dir / "family.csv", &header);
  CHECK(header == "x,u,du");
  REQUIRE(rows.size() > 50);
  const double C = std::pow(25.0 / 6.0, 0.2);
  for (const auto& row : rows) {
    const double x = row[0];
    const double u = C * std::pow(x, 0.6) * std::pow(1.0 + x, 0.4);
    CHECK(std::abs(row[1] - u) <= 1e-5 * u);
  }
  CHECK(rows.back()[0] == doctest::Approx(100.0));
  const json manifest = json::parse(std::ifstream(dir / "manifest.json"));
  CHECK(manifest.contains("mu_plus"));
  CHECK(manifest.contains("slope_estimate"));
}

TEST_CASE("family with w0 = 0 emits u_a samples") {
  const fs::path dir = fresh_dir("family0");
  REQUIRE(run({"family", "--sigma", "1", "--p", "-4", "--w0", "0", "--out", dir.string()}).code == 0);
  std::string header;
  const double C = std::pow(25.0 / 6.0, 0.2);
  for (const auto& row : read_csv(dir / "family.csv", &header)) {
    CHECK(row[1] == doctest::Approx(C * std::pow(row[0], 0.6)).epsilon(1e-9));
  }
}

TEST_CASE("family outside case C1 is invalid input and writes nothing") {
  const fs::path dir = fresh_dir("family_c2");
  const Run r = run({"family", "--sigma", "-4", "--p", "4", "--w0", "0.4", "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("verify exit codes") {
  const Run a = run({"verify", "--suite", "atlas"});
  CHECK(a.code == 0);
  const json j = json::parse(a.out);
  CHECK(j["failed"] == 0);
  CHECK(j["passed"].get<int>() > 0);
  CHECK(run({"verify", "--suite", "bogus"}).code == 2);
  // a zero tolerance scale turns every inexact check into a finding
  const Run bad = run({"verify", "--suite", "closedforms", "--tolerance-scale", "0"});
  CHECK(bad.code == 1);
  CHECK_FALSE(json::parse(bad.out)["findings"].empty());
}

TEST_CASE("tolerance precedence: flag over config over HH_TOL over default") {
  const auto tol_of = [](const Run& r) { return json::parse(r.out)["tolerance"].get<double>(); };
  CHECK(tol_of(run({"verify", "--suite", "atlas"})) == 1e-10);
  CHECK(tol_of(run({"verify", "--suite", "atlas"}, "HH_TOL=1e-7")) == 1e-7);
  CHECK(tol_of(run({"--tol", "1e-9", "verify", "--suite", "atlas"}, "HH_TOL=1e-7")) == 1e-9);
  CHECK(run({"verify", "--suite", "atlas"}, "HH_TOL=abc").code == 2);

  const fs::path dir = fresh_dir("config");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "hh.ini");
    cfg << "tol=1e-8\n[verify]\nsuite=atlas\n";
  }
  const std::string cfg = (dir / "hh.ini").string();
  CHECK(tol_of(run({"--config", cfg, "verify"}, "HH_TOL=1e-7")) == 1e-8);
  CHECK(tol_of(run({"--config", cfg, "--tol", "1e-6", "verify"})) == 1e-6);
  CHECK(run({"--config", (dir / "missing.ini").string(), "verify"}).code == 2);
}

TEST_CASE("determinism: identical invocations give identical bytes") {
  const std::vector<std::string> cmds[] = {
      {"classify", "--n", "1", "--p", "-4", "--sigma", "1", "--domain", "half"},
      {"kelvin", "--p", "-4", "--sigma", "1"},
      {"orbit", "--a", "0.5", "--p", "5", "--v0", "1.1", "--vdot0", "0"},
      {"verify", "--suite", "dynamics"},
      {"--pretty", "shoot", "--n", "3", "--p", "5", "--sigma", "0", "--u0", "1.3160740129524924"},
  };
  for (const auto& c : cmds) {
    const Run a = run(c), b = run(c);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}

TEST_CASE("property: malformed flags keep the exit-code contract") {
  const std::vector<std::string> commands = {"classify", "family", "kelvin", "shoot", "orbit", "below-ua", "atlas-export"};
  const std::vector<std::string> flags = {"--n", "--p", "--sigma", "--domain", "--w0", "--xmax", "--u0", "--slope0",
                                          "--rmax", "--a", "--v0", "--vdot0", "--z1", "--p-steps", "--sigma-steps", "--bogus"};
  const std::vector<std::string> values = {"3", "-4", "1", "0", "0.4", "-0.04", "half", "full", "nan", "inf", "-inf",
                                           "1e400", "x", "", "--", "2.5", "-1", "100", "1e-300", "5"};
  std::mt19937_64 rng(2024);
  const auto pick = [&](const std::vector<std::string>& v) { return v[rng() % v.size()]; };
  int zero = 0, one = 0, two = 0;
  for (int k = 0; k < 60; ++k) {
    const fs::path dir = fresh_dir("fuzz_" + std::to_string(k));
    std::vector<std::string> args{pick(commands)};
    const int count = static_cast<int>(rng() % 7);
    for (int i = 0; i < count; ++i) {
      args.push_back(pick(flags));
      if (rng() % 5) args.push_back(pick(values));
    }
    if (args[0] != "classify" && args[0] != "kelvin") {
      args.push_back("--out");
      args.push_back(dir.string());
    }
    std::string shown;
    for (const auto& a : args) shown += a + " ";
    INFO(shown);
    const Run r = run(args);
    CHECK((r.code == 0 || r.code == 1 || r.code == 2));
    if (r.code == 2) {
      CHECK_FALSE(fs::exists(dir));
      ++two;
    } else {
      CHECK(json::accept(r.out));
      (r.code == 0 ? zero : one) += 1;
    }
  }
  CHECK(two > 0);
  MESSAGE("fuzz exits: 0 -> " << zero << ", 1 -> " << one << ", 2 -> " << two);
}
