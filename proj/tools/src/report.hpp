// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "config.hpp"
#include "dipolarbus/ensemble.hpp"
#include "dipolarbus/gate_analysis.hpp"

namespace dipolarbus::cli {

struct Provenance {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string units = "internal";
};

Json to_json(const Provenance& p);
Json to_json(const GateResult& r);
Json to_json(const LZFit& fit);
Json to_json(const LZSweep& sweep);
Json to_json(const Statistics& s);
Json to_json(const EnsembleReport& report);

/// Writes pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const Json& j);

/// Opens a file for LF-terminated text output, throwing on failure.
std::ofstream open_output(const std::filesystem::path& path);

std::string version_string();

}  // namespace dipolarbus::cli
