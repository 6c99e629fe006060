// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dipolarbus/ensemble.hpp"
#include "dipolarbus/error_model.hpp"
#include "dipolarbus/evolution.hpp"
#include "dipolarbus/gate_analysis.hpp"
#include "dipolarbus/geometry.hpp"
#include "dipolarbus/hamiltonian.hpp"

namespace dipolarbus::cli {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct EnsembleSettings {
  int realizations = 1;
  std::uint64_t base_seed = 0;
  Pipeline pipeline = Pipeline::gap_and_eint;
};

struct DisorderSettings {
  int realizations = 0;
  std::uint64_t base_seed = 0;
  int n_sites = 0;
};

struct ErrorCurveSettings {
  std::vector<double> gamma0_grid;
  std::optional<double> delta_exp;
  double b = kReferenceFitB;
  double c = kReferenceFitC;
  std::optional<double> gap;
  std::optional<double> e_int;
  std::optional<double> span_l;
  std::optional<double> l0;
  std::optional<DisorderSettings> disorder;
};

enum class OracleMode { spacing, lattice, scaling };
std::string to_string(OracleMode mode);
OracleMode parse_oracle_mode(const std::string& name);

struct OracleSettings {
  OracleMode mode = OracleMode::scaling;
  std::vector<double> spans{80.0, 160.0};
  double d = 0.5;
  int n_exc = 17;
  std::vector<int> p_values{3, 6};
  std::vector<double> c_over_delta{10.0, 30.0, 100.0, 300.0};
  double span_over_a_r = 25.5;
  double relax_tolerance = 1e-10;
};

/// Parsed and validated configuration document.
struct RunConfig {
  Json document;
  std::string units = "internal";
  std::optional<Preset> preset;
  GeometrySpec geometry;
  std::uint64_t seed = 0;
  BasisChoice basis;
  DriveParams drive;
  ProtocolSchedule schedule;
  GateOptions gate;
  std::vector<double> omega0_grid;
  EnsembleSettings ensemble;
  ErrorCurveSettings error_curve;
  OracleSettings oracle;
};

/// Validates a configuration document against schema version 1. Unknown keys,
/// missing required keys and out-of-range values raise ConfigError naming the
/// offending key path.
RunConfig parse_config(const Json& document);

RunConfig load_config(const std::filesystem::path& path);

/// "fnv1a64:<16 hex digits>" over the canonical (sorted-key, compact) dump.
std::string config_hash(const Json& document);

/// Fully resolved settings, echoed by --dry-run.
Json describe(const RunConfig& config);

}  // namespace dipolarbus::cli
