// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spectral.hpp
 * @brief Low-lying eigenpairs, ramp-minimum gaps and the qubit interaction energy.
 */

#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "dipolarbus/basis.hpp"
#include "dipolarbus/common.hpp"
#include "dipolarbus/geometry.hpp"
#include "dipolarbus/hamiltonian.hpp"

namespace dipolarbus {

struct EigenOptions {
  /// Residual target relative to the Gershgorin norm estimate.
  double tol = 1e-10;
  int max_iter = 2000;
  int max_subspace = 24;
};

struct SpectralResult {
  double e0 = 0.0;
  double e1 = 0.0;
  bool has_e1 = false;
  RealVector psi0;
  RealVector psi1;
  /// Largest residual norm ||H psi - E psi|| over the returned pairs.
  double residual = 0.0;
  int iterations = 0;
};

/// Two lowest eigenpairs by block Davidson iteration with a diagonal
/// preconditioner, full reorthogonalisation and thick restarts. Starting
/// vectors are fixed, so results are reproducible bit for bit.
/// Throws NumericalError when the residual target is not met within max_iter.
SpectralResult lowest_two(const SparseHamiltonian& h, const EigenOptions& options = {});

/// Relative threshold below which e1 - e0 is treated as a degeneracy.
inline constexpr double kDegeneracyThreshold = 1e-10;

struct GapResult {
  double gap = 0.0;
  double argmin_time = 0.0;
  QubitSector argmin_sector = kSectorDD;
  /// Set when the minimum fell under the degeneracy guard; gap is then 0.
  bool degenerate = false;
  int evaluations = 0;
};

struct GapOptions {
  int grid_points = 64;
  EigenOptions eigen;
  int workers = 1;
};

/// Minimum of e1 - e0 over a uniform time grid on [0, t0] and over the given
/// sectors, followed by one local refinement around the coarse minimum.
GapResult min_gap_over_ramp(const ChainGeometry& geometry, const BasisSet& basis,
                            const DriveParams& params, std::span<const QubitSector> sectors,
                            const GapOptions& options = {});

/// e1 - e0 of one sector at each of the given times.
std::vector<double> gap_curve(const SectorHamiltonian& hamiltonian, std::span<const double> times,
                              const EigenOptions& options = {});

struct InteractionEnergy {
  double e_uu = 0.0;
  double e_ud = 0.0;
  double e_du = 0.0;
  double e_dd = 0.0;
  double e_int = 0.0;

  [[nodiscard]] double energy(QubitSector sector) const noexcept;
};

/// Ground and first excited states of all four sectors at one instant.
struct HoldPointAnalysis {
  InteractionEnergy energies;
  std::array<SpectralResult, 4> sectors;
  /// Smallest e1 - e0 over the four sectors at this instant.
  double hold_gap = 0.0;
};

HoldPointAnalysis analyze_hold_point(const ChainGeometry& geometry, const BasisSet& basis,
                                     const DriveParams& params, std::optional<double> at_time = {},
                                     const EigenOptions& options = {}, int workers = 1);

/// E_int = E_uu - E_ud - E_du + E_dd from the sector ground energies at
/// at_time (default: the hold point t0).
InteractionEnergy interaction_energy(const ChainGeometry& geometry, const BasisSet& basis,
                                     const DriveParams& params, std::optional<double> at_time = {},
                                     const EigenOptions& options = {}, int workers = 1);

}  // namespace dipolarbus
