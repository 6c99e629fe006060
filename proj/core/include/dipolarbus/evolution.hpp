// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file evolution.hpp
 * @brief Time-dependent propagation of the bus through ramp-up, hold and reversal.
 *
 * Each step of length dt uses the Hamiltonian frozen at the step midpoint and
 * is applied as a Krylov matrix exponential. The reverse ramp either negates
 * the Hamiltonian (sign_flip) or replays the profiles backwards with the
 * original sign (reversed_profile).
 */

#pragma once

#include <array>
#include <optional>
#include <string>

#include "dipolarbus/basis.hpp"
#include "dipolarbus/common.hpp"
#include "dipolarbus/geometry.hpp"
#include "dipolarbus/hamiltonian.hpp"
#include "dipolarbus/krylov.hpp"
#include "dipolarbus/spectral.hpp"

namespace dipolarbus {

enum class Reversal { sign_flip, reversed_profile };
enum class Direction { forward, reverse };

std::string to_string(Reversal reversal);
Reversal parse_reversal(const std::string& name);

/// Abort threshold on |‖psi‖ - 1| accumulated over a propagation.
inline constexpr double kMaxNormDrift = 1e-9;

struct ProtocolSchedule {
  double t0 = 100.0;
  /// Hold duration; empty means pi / |E_int| evaluated at t0.
  std::optional<double> t_pi;
  Reversal reversal = Reversal::sign_flip;
  /// Ramp step; empty means t0 / default_steps.
  std::optional<double> dt;
  int default_steps = 2048;
  KrylovOptions krylov;

  [[nodiscard]] double step() const noexcept { return dt.value_or(t0 / default_steps); }
  void validate() const;
};

struct SectorTrajectory {
  ComplexVector final_state;
  /// <initial | final> for the initial state of the propagation that produced it.
  Complex overlap_with_initial{1.0, 0.0};
  double norm_drift = 0.0;
  int substeps = 0;
};

/// Integrates one ramp. Forward starts from the vacuum unless an initial state
/// is supplied; reverse must be given the state to unwind.
SectorTrajectory propagate_ramp(const BasisSet& basis, const ChainGeometry& geometry,
                                QubitSector sector, const DriveParams& params,
                                const ProtocolSchedule& schedule, Direction direction,
                                std::optional<ComplexVector> initial = {});

/// Free evolution under the Hamiltonian frozen at at_time.
SectorTrajectory hold(ComplexVector state, const BasisSet& basis, const ChainGeometry& geometry,
                      QubitSector sector, const DriveParams& params, double at_time,
                      double duration, const KrylovOptions& options = {});

struct ProtocolResult {
  /// Indexed by QubitSector::index(); overlaps are taken against the vacuum.
  std::array<SectorTrajectory, 4> sectors;
  double t_pi = 0.0;
  double t_g = 0.0;
  /// Present when t_pi was derived from the hold-point interaction energy.
  std::optional<InteractionEnergy> interaction;
};

struct ProtocolOptions {
  EigenOptions eigen;
  int workers = 1;
};

/// Vacuum -> ramp up -> hold(t_pi) -> reverse ramp, for all four sectors.
ProtocolResult run_protocol(const BasisSet& basis, const ChainGeometry& geometry,
                            const DriveParams& params, const ProtocolSchedule& schedule,
                            const ProtocolOptions& options = {});

}  // namespace dipolarbus
