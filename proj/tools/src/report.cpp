// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "report.hpp"

#include <cmath>
#include <fstream>

#include "dipolarbus/common.hpp"

#ifndef DIPOLARBUS_VERSION
#define DIPOLARBUS_VERSION "unknown"
#endif

namespace dipolarbus::cli {

namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

/// NaN and infinities become null.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

std::string version_string() { return DIPOLARBUS_VERSION; }

Json to_json(const Provenance& p) {
  return {{"tool", "dipolarbus"},
          {"version", version_string()},
          {"command", p.command},
          {"config_hash", p.config_hash},
          {"seed", p.seed},
          {"schema_version", kSchemaVersion},
          {"units", p.units}};
}

Json to_json(const GateResult& r) {
  Json overlaps = Json::array();
  for (int i = 0; i < 4; ++i) {
    Json row = Json::array();
    for (int j = 0; j < 4; ++j) row.push_back(complex_json(r.overlaps(i, j)));
    overlaps.push_back(row);
  }
  Json vac = Json::object();
  for (std::size_t i = 0; i < 4; ++i) vac[to_string(kAllSectors[i])] = complex_json(r.vacuum_overlaps[i]);
  return {{"fidelity", r.fidelity},
          {"conditional_phase", r.phase_defined ? Json(r.conditional_phase) : Json(nullptr)},
          {"phase_defined", r.phase_defined},
          {"e_int", r.e_int},
          {"sector_energies",
           {{"uu", r.energies.e_uu}, {"ud", r.energies.e_ud}, {"du", r.energies.e_du}, {"dd", r.energies.e_dd}}},
          {"gap", number(r.gap)},
          {"gap_time", r.gap_time},
          {"gap_sector", to_string(r.gap_sector)},
          {"gap_degenerate", r.gap_degenerate},
          {"hold_gap", r.hold_gap},
          {"l0", number(r.l0)},
          {"t0", r.t0},
          {"t_pi", r.t_pi},
          {"t_g", r.t_g},
          {"overlaps_order", {"dd", "du", "ud", "uu"}},
          {"overlaps", overlaps},
          {"vacuum_overlaps", vac},
          {"max_norm_drift", r.max_norm_drift},
          {"basis_dim", r.basis_dim}};
}

Json to_json(const LZFit& fit) {
  return {{"b", fit.b}, {"c", fit.c}, {"r_squared", fit.r_squared}, {"iterations", fit.iterations},
          {"n_points", fit.points.size()}};
}

Json to_json(const LZSweep& sweep) {
  Json failures = Json::array();
  for (const auto& f : sweep.failures) failures.push_back({{"omega0", f.omega0}, {"reason", f.reason}});
  return {{"fit", sweep.fit ? to_json(*sweep.fit) : Json(nullptr)},
          {"monotone", sweep.monotone},
          {"completed", sweep.points.size()},
          {"failures", failures}};
}

Json to_json(const Statistics& s) {
  return {{"count", s.count}, {"mean", s.mean}, {"stddev", s.stddev}, {"p05", s.p05},
          {"p95", s.p95},     {"min", s.min},   {"max", s.max}};
}

Json to_json(const EnsembleReport& report) {
  Json records = Json::array();
  for (const auto& r : report.records) {
    Json j = {{"index", r.index},
              {"seed", r.seed},
              {"span_l", r.span_l},
              {"min_separation", r.min_separation},
              {"basis_dim", r.basis_dim},
              {"gap", r.gap},
              {"e_int", r.e_int},
              {"hold_gap", r.hold_gap},
              {"l0", number(r.l0)}};
    if (r.fidelity) j["fidelity"] = *r.fidelity;
    if (report.pipeline == Pipeline::full_gate) {
      j["conditional_phase"] = r.conditional_phase ? Json(*r.conditional_phase) : Json(nullptr);
    }
    if (!r.curve.empty()) {
      Json curve = Json::array();
      for (const auto& c : r.curve) {
        curve.push_back({{"gamma0", c.gamma0}, {"f_max", c.f_max}, {"t0_opt", c.t0_opt},
                         {"t_g", c.t_g}, {"unbounded", c.unbounded}, {"f_bare", c.f_bare}});
      }
      j["curve"] = curve;
    }
    records.push_back(j);
  }
  Json failures = Json::array();
  for (const auto& f : report.failures) {
    failures.push_back({{"index", f.index}, {"seed", f.seed}, {"reason", f.reason}});
  }
  Json aggregates = Json::object();
  for (const auto& a : report.aggregates) aggregates[a.quantity] = to_json(a.stats);
  Json out = {{"pipeline", to_string(report.pipeline)},
              {"total", report.total},
              {"successes", report.records.size()},
              {"failed", report.failures.size()},
              {"realizations", records},
              {"failures", failures},
              {"aggregates", aggregates}};
  if (!report.curve.empty()) {
    Json bands = Json::array();
    for (const auto& b : report.curve) {
      bands.push_back({{"gamma0", b.gamma0},
                       {"f_max", to_json(b.f_max)},
                       {"t0_opt", to_json(b.t0_opt)},
                       {"t_g", to_json(b.t_g)},
                       {"f_bare_mean", b.f_bare_mean}});
    }
    out["curve"] = bands;
  }
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot write '" + path.string() + "'");
  return os;
}

void write_json(const std::filesystem::path& path, const Json& j) {
  auto os = open_output(path);
  os << j.dump(2) << '\n';
  if (!os) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace dipolarbus::cli
