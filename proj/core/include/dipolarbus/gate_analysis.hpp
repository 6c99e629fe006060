// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file gate_analysis.hpp
 * @brief Gate-level quantities from the four sector trajectories: the qubit
 *        density matrix, disentanglement fidelity, conditional phase, and the
 *        Landau-Zener fit over a drive-strength sweep.
 */

#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dipolarbus/basis.hpp"
#include "dipolarbus/evolution.hpp"
#include "dipolarbus/geometry.hpp"
#include "dipolarbus/hamiltonian.hpp"
#include "dipolarbus/spectral.hpp"

namespace dipolarbus {

using Matrix4c = Eigen::Matrix<Complex, 4, 4>;

/// overlaps(i, j) = <chi_j | chi_i>, sectors ordered by QubitSector::index().
Matrix4c overlap_matrix(const std::array<SectorTrajectory, 4>& sectors);

/// rho_AB for the initial qubit state |+>|+>: one quarter of the overlap matrix.
Matrix4c qubit_density_matrix(const std::array<SectorTrajectory, 4>& sectors);

/// sqrt(tr rho^2) = sqrt(sum |rho_mn|^2).
double gate_fidelity(const Matrix4c& rho);

/// Vacuum overlaps below this modulus make the conditional phase meaningless.
inline constexpr double kMinVacuumOverlap = 0.5;

/// phi_uu - phi_ud - phi_du + phi_dd from the vacuum overlaps, in (-pi, pi].
/// Throws NumericalError when any overlap modulus is <= kMinVacuumOverlap.
double conditional_phase(const std::array<SectorTrajectory, 4>& sectors);

struct GateOptions {
  GapOptions gap;
  /// Hold time as a multiple of pi / |E_int| when the schedule leaves it open.
  double hold_scale = 1.0;
  /// Skip the ramp-minimum gap search (gap reported as NaN).
  bool compute_gap = true;
  int workers = 1;
};

struct GateResult {
  double fidelity = 0.0;
  /// NaN when the run was not adiabatic enough for the phase to be defined.
  double conditional_phase = 0.0;
  bool phase_defined = false;
  double e_int = 0.0;
  InteractionEnergy energies;
  double gap = 0.0;
  double gap_time = 0.0;
  QubitSector gap_sector = kSectorDD;
  bool gap_degenerate = false;
  /// Smallest e1 - e0 over the sectors at the hold point.
  double hold_gap = 0.0;
  /// L / sum_i <P_i^up> of the hold-point ground state of the dd sector.
  double l0 = 0.0;
  double t0 = 0.0;
  double t_pi = 0.0;
  double t_g = 0.0;
  Matrix4c overlaps = Matrix4c::Zero();
  std::array<Complex, 4> vacuum_overlaps{};
  double max_norm_drift = 0.0;
  std::size_t basis_dim = 0;
};

/// Hold-point spectroscopy, ramp-minimum gap and the full protocol.
GateResult run_gate(const ChainGeometry& geometry, const BasisSet& basis, const DriveParams& params,
                    const ProtocolSchedule& schedule, const GateOptions& options = {});

struct LZFit {
  double b = 0.0;
  double c = 0.0;
  double r_squared = 0.0;
  int iterations = 0;
  /// (gap * t0, fidelity) pairs the fit was made on.
  std::vector<std::array<double, 2>> points;
  [[nodiscard]] double model(double x) const noexcept;
};

/// Least-squares fit of 1 - F = b exp(-c x) over (log b, log c) by damped
/// Gauss-Newton, started from a log-linear regression; b is kept <= 1.
/// r^2 is reported on F. Requires >= 5 points.
LZFit fit_landau_zener(std::span<const std::array<double, 2>> points);

struct SweepPoint {
  double omega0 = 0.0;
  double gap = 0.0;
  double t0 = 0.0;
  double fidelity = 0.0;
  double conditional_phase = 0.0;
  double e_int = 0.0;
  double t_pi = 0.0;
  [[nodiscard]] double gap_t0_product() const noexcept { return gap * t0; }
};

struct SweepFailure {
  double omega0 = 0.0;
  std::string reason;
};

struct LZSweep {
  /// Completed points in grid order.
  std::vector<SweepPoint> points;
  std::vector<SweepFailure> failures;
  /// Present only when every point succeeded.
  std::optional<LZFit> fit;
  /// F non-decreasing in gap * t0 over the completed points.
  bool monotone = false;
};

/// Minimum number of grid values accepted by lz_sweep.
inline constexpr std::size_t kMinSweepPoints = 5;

/// Sorted grid with exact duplicates removed; `removed` counts the drops.
std::vector<double> dedupe_grid(std::span<const double> values, std::size_t* removed = nullptr);

/// Runs the full gate at each omega0 (other parameters fixed) and fits the
/// Landau-Zener law. Points run in parallel over options.workers.
LZSweep lz_sweep(const ChainGeometry& geometry, const BasisSet& basis, const DriveParams& params,
                 const ProtocolSchedule& schedule, std::span<const double> omega0_values,
                 const GateOptions& options = {});

/// Whether fidelity is non-decreasing in gap * t0, with a slack for solver noise.
bool fidelity_monotone(std::span<const SweepPoint> points, double slack = 0.0);

void write_sweep_csv(std::ostream& os, std::span<const SweepPoint> points);

}  // namespace dipolarbus
