// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"

namespace fs = std::filesystem;
using dipolarbus::cli::run;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "dipolarbus_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const auto path = dir / "config.json";
  std::ofstream(path) << body;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmallGate = R"({"schema_version":1,
  "geometry":{"mode":"equidistant","n_sites":4,"offset_d":3},
  "drive":{"omega0":1,"delta0":2.3,"t0":20,"c_p":100,"p":3}})";

const char* kCurve = R"({"schema_version":1,
  "geometry":{"mode":"equidistant","n_sites":4,"offset_d":3},
  "drive":{"omega0":1,"delta0":2.3,"t0":20,"c_p":100,"p":3},
  "error_curve":{"gap":0.05,"e_int":-0.2,"span_l":10,"l0":5,"delta_exp":1,
                 "gamma0_grid":[0,1e-6,1e-4]}})";

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"teleport"}).code == 1);
  CHECK(invoke({"gate-run"}).code == 1);
  CHECK(invoke({"gate-run", "--config", "/nonexistent/config.json"}).code == 1);
  CHECK(invoke({"--help"}).code == 0);
  const auto v = invoke({"--version"});
  CHECK(v.code == 0);
}

TEST_CASE("config errors name the offending key") {
  const auto dir = scratch("bad_config");
  const auto path = write_config(dir, R"({"schema_version":1,"geometry":{"mode":"equidistant","n_sites":"six","offset_d":3}})");
  const auto r = invoke({"gate-run", "--config", path.string(), "--dry-run"});
  CHECK(r.code == 1);
  CHECK(r.err.find("geometry.n_sites") != std::string::npos);

  const auto unknown = write_config(dir, R"({"schema_version":1,"geometry":{"mode":"equidistant","n_sites":6,"n_sitez":6,"offset_d":3}})");
  const auto r2 = invoke({"gate-run", "--config", unknown.string(), "--dry-run"});
  CHECK(r2.code == 1);
  CHECK(r2.err.find("geometry.n_sitez") != std::string::npos);
}

TEST_CASE("dry run prints the resolved configuration without writing files") {
  const auto dir = scratch("dry");
  const auto path = write_config(dir, kSmallGate);
  const auto out = dir / "out";
  const auto r = invoke({"gate-run", "--config", path.string(), "--out", out.string(), "--dry-run"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["dry_run"] == true);
  CHECK(j.contains("provenance"));
  CHECK(j["geometry"]["n_sites"] == 4);
  CHECK_FALSE(fs::exists(out / "gate_result.json"));
}

TEST_CASE("worker count validation") {
  const auto dir = scratch("workers");
  const auto path = write_config(dir, kSmallGate);
  CHECK(invoke({"gate-run", "--config", path.string(), "--workers", "0", "--dry-run"}).code == 1);
  ::setenv("DIPOLARBUS_WORKERS", "lots", 1);
  CHECK(invoke({"gate-run", "--config", path.string(), "--out", (dir / "o").string()}).code == 1);
  ::unsetenv("DIPOLARBUS_WORKERS");
}

TEST_CASE("gate-run writes a reproducible result") {
  const auto dir = scratch("gate");
  const auto path = write_config(dir, kSmallGate);
  const auto a = invoke({"gate-run", "--config", path.string(), "--out", (dir / "a").string()});
  const auto b = invoke({"gate-run", "--config", path.string(), "--out", (dir / "b").string(),
                         "--workers", "2"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  const auto text = slurp(dir / "a" / "gate_result.json");
  CHECK(text == slurp(dir / "b" / "gate_result.json"));
  const auto j = nlohmann::json::parse(text);
  CHECK(j.contains("provenance"));
  CHECK(j["provenance"]["command"] == "gate-run");
  CHECK(j["fidelity"].get<double>() <= 1.0);
  CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("lz-sweep needs five distinct points") {
  const auto dir = scratch("lz");
  const auto path = write_config(dir, kSmallGate);
  const auto one = invoke({"lz-sweep", "--config", path.string(), "--omega0-grid", "1.0"});
  CHECK(one.code == 1);
  CHECK(one.err.find("fit requires >= 5 points") != std::string::npos);

  const auto dup = invoke({"lz-sweep", "--config", path.string(), "--omega0-grid",
                           "0.5,0.6,0.6,0.7,0.8", "--dry-run"});
  CHECK(dup.code == 1);
  CHECK(dup.err.find("warning: removed 1 duplicate") != std::string::npos);

  const auto ok = invoke({"lz-sweep", "--config", path.string(), "--omega0-grid",
                          "0.5,0.6,0.6,0.7,0.8,0.9", "--dry-run"});
  CHECK(ok.code == 0);
  CHECK(ok.err.find("warning") != std::string::npos);
}

TEST_CASE("error-curve input validation") {
  const auto dir = scratch("curve_bad");
  const auto missing = write_config(dir, R"({"schema_version":1,
    "geometry":{"mode":"equidistant","n_sites":4,"offset_d":3},
    "drive":{"omega0":1,"delta0":2.3,"t0":20,"c_p":100,"p":3},
    "error_curve":{"gap":0.05}})");
  const auto r = invoke({"error-curve", "--config", missing.string()});
  CHECK(r.code == 1);
  for (const char* key : {"error_curve.e_int", "error_curve.span_l", "error_curve.l0"}) {
    CHECK(r.err.find(key) != std::string::npos);
  }
  const auto path = write_config(dir, kCurve);
  CHECK(invoke({"error-curve", "--config", path.string(), "--preset", "nv"}).code == 1);
  CHECK(invoke({"error-curve"}).code == 1);
  CHECK(invoke({"error-curve", "--preset", "strontium"}).code == 1);
}

TEST_CASE("error-curve output is complete and byte-identical across reruns") {
  const auto dir = scratch("curve");
  const auto path = write_config(dir, kCurve);
  const auto a = invoke({"error-curve", "--config", path.string(), "--out", (dir / "a").string()});
  const auto b = invoke({"error-curve", "--config", path.string(), "--out", (dir / "b").string()});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  const auto csv = slurp(dir / "a" / "error_curve.csv");
  CHECK(csv == slurp(dir / "b" / "error_curve.csv"));
  CHECK(slurp(dir / "a" / "error_curve.json") == slurp(dir / "b" / "error_curve.json"));
  CHECK(csv.rfind("gamma0,f_protocol_equidistant,f_protocol_disordered_p05,"
                  "f_protocol_disordered_p95,f_bare,t0_opt,t_g\n",
                  0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  // gamma0 = 0: perfect protocol and bare gate.
  CHECK(line.rfind("0,1,,,1,", 0) == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "a" / "error_curve.json"));
  CHECK(j.contains("provenance"));
}

TEST_CASE("oracle lattice mode") {
  const auto dir = scratch("oracle");
  const auto path = write_config(dir, R"({"schema_version":1,
    "geometry":{"mode":"equidistant","n_sites":8,"offset_d":3},
    "drive":{"omega0":1,"delta0":2.3,"t0":20,"c_p":100,"p":3}})");
  const auto r = invoke({"oracle", "lattice", "--config", path.string(), "--out", (dir / "o").string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "o" / "oracle_lattice.json"));
  CHECK(invoke({"oracle", "bogus", "--config", path.string()}).code == 1);
}
