// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file ensemble.hpp
 * @brief Disorder ensembles: one geometry per seed, per-realization records
 *        and aggregate statistics with nearest-rank percentile bands.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dipolarbus/basis.hpp"
#include "dipolarbus/error_model.hpp"
#include "dipolarbus/evolution.hpp"
#include "dipolarbus/gate_analysis.hpp"
#include "dipolarbus/geometry.hpp"
#include "dipolarbus/hamiltonian.hpp"

namespace dipolarbus {

enum class Pipeline { gap_and_eint, full_gate, error_curve };

std::string to_string(Pipeline pipeline);
Pipeline parse_pipeline(const std::string& name);

/// How each realization's basis is chosen.
struct BasisChoice {
  enum class Kind { full, truncated, automatic };
  Kind kind = Kind::full;
  TruncatedPolicy truncated;  ///< used when kind == truncated
  std::size_t max_dim = kDefaultMaxBasisDim;
};

/// Resolves a basis choice for one geometry; `automatic` uses default_truncation.
BasisPolicy resolve_basis(const BasisChoice& choice, const ChainGeometry& geometry,
                          const DriveParams& params);

/// Inputs of the per-realization fidelity optimisation over t0 (internal units).
struct CurveSpec {
  std::vector<double> gamma0;
  double delta_exp = 1.0;
  double b = kReferenceFitB;
  double c = kReferenceFitC;
};

struct EnsembleSpec {
  int realizations = 1;
  std::uint64_t base_seed = 0;
  GeometrySpec geometry;
  BasisChoice basis;
  DriveParams drive;
  ProtocolSchedule schedule;
  GateOptions gate;
  CurveSpec curve;
  int workers = 1;
  void validate(Pipeline pipeline) const;
};

struct CurvePoint {
  double gamma0 = 0.0;
  double f_max = 0.0;
  double t0_opt = 0.0;
  double t_g = 0.0;
  bool unbounded = false;
  double f_bare = 0.0;
};

struct RealizationRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double span_l = 0.0;
  double min_separation = 0.0;
  std::size_t basis_dim = 0;
  double gap = 0.0;
  double e_int = 0.0;
  double hold_gap = 0.0;
  double l0 = 0.0;
  std::optional<double> fidelity;
  std::optional<double> conditional_phase;
  std::vector<CurvePoint> curve;
};

struct RealizationFailure {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string reason;
};

struct Statistics {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation (0 for one value)
  double p05 = 0.0;
  double p95 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Nearest-rank percentile: the ceil(P/100 n)-th smallest value.
double percentile_nearest_rank(std::span<const double> values, double percent);

/// Mean, spread and nearest-rank 5/95 band; a constant sample yields exactly
/// zero spread. Non-finite values are rejected by the caller.
Statistics summarize(std::span<const double> values);

struct NamedStatistics {
  std::string quantity;
  Statistics stats;
};

struct CurveBand {
  double gamma0 = 0.0;
  Statistics f_max;
  Statistics t0_opt;
  Statistics t_g;
  double f_bare_mean = 0.0;
};

struct EnsembleReport {
  Pipeline pipeline = Pipeline::gap_and_eint;
  std::size_t total = 0;
  std::vector<RealizationRecord> records;  ///< successes, by realization index
  std::vector<RealizationFailure> failures;
  std::vector<NamedStatistics> aggregates;
  std::vector<CurveBand> curve;
};

/// One record for seed base_seed + k; throws on any failure.
RealizationRecord run_realization(const EnsembleSpec& spec, Pipeline pipeline, std::size_t k);

/// Runs all realizations (in parallel over spec.workers), records failures and
/// aggregates the successes in index order. Throws NumericalError if every
/// realization failed.
EnsembleReport run_ensemble(const EnsembleSpec& spec, Pipeline pipeline);

/// One row per realization (failures included with their reason).
void write_ensemble_csv(std::ostream& os, const EnsembleReport& report);

}  // namespace dipolarbus
