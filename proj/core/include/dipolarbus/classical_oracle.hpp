// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file classical_oracle.hpp
 * @brief Classical (Omega = 0) ground states used as independent references:
 *        exact lattice enumeration, continuum crystal relaxation and the
 *        crystal-spacing formula.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "dipolarbus/basis.hpp"
#include "dipolarbus/geometry.hpp"
#include "dipolarbus/hamiltonian.hpp"

namespace dipolarbus {

/// a_R = [zeta(p) (p+1) C_p / Delta]^{1/p}; the spacing minimising the energy
/// per length of an infinite classical crystal.
double crystal_spacing(int p, double c_p, double delta);

/// n_max = ceil(L / a_R) + 2 (capped at N) and r_cut = a_R / 2, with a_R at delta0.
TruncatedPolicy default_truncation(const ChainGeometry& geometry, const DriveParams& params);

struct ClassicalGroundState {
  SpinConfig config = 0;                   ///< lattice mode
  std::vector<double> excitation_positions;  ///< both modes
  double energy = 0.0;
  int n_excitations = 0;
};

/// Default cap on visited configurations during lattice enumeration.
inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 26;

/// Exact minimiser of the Omega = 0 diagonal energy (detuning, pair
/// interactions and sector boundary potential) over all configurations with
/// at most n_max excitations. Throws NumericalError when the enumeration
/// budget is exhausted.
ClassicalGroundState lattice_ground_state(const ChainGeometry& geometry, QubitSector sector,
                                          double c_p, int p, double delta,
                                          std::optional<int> n_max = {},
                                          std::uint64_t budget = kDefaultEnumerationBudget);

struct RelaxOptions {
  double tolerance = 1e-10;  ///< max Newton update relative to span
  int max_iterations = 500;  ///< Newton iterations per start
  int starts = 3;
};

/// Interaction energy of n_exc ordered excitations on [0, span], including
/// the boundary-qubit terms of the sector (qubits at -d and span + d).
double continuum_energy(std::span<const double> positions, double span, QubitSector sector,
                        double d, double c_p, int p);

/// Minimises continuum_energy by active-set Newton iteration from an equally
/// spaced start and options.starts - 1 perturbed ones. The detuning does not
/// enter because n_exc is fixed.
ClassicalGroundState continuum_relax(int n_exc, double span, QubitSector sector, double d,
                                     double c_p, int p, const RelaxOptions& options = {});

struct ContinuumCrystal {
  ClassicalGroundState state;
  double total_energy = 0.0;  ///< interaction energy - delta * n_exc
  double mean_spacing = 0.0;
};

/// Scans n_exc around span / a_R and keeps the count minimising
/// continuum energy - delta * n_exc (no boundary qubits).
ContinuumCrystal optimal_continuum_crystal(double span, double delta, double c_p, int p,
                                           const RelaxOptions& options = {});

struct ContinuumScalingRow {
  double span = 0.0;
  double d = 0.0;
  int n_exc = 0;
  double e_uu = 0.0;
  double e_ud = 0.0;
  double e_du = 0.0;
  double e_dd = 0.0;
  double e_int = 0.0;
  [[nodiscard]] double e_int_times_span_over_d2() const noexcept { return e_int * span / (d * d); }
};

/// Four-sector continuum energies and their E_int combination.
ContinuumScalingRow continuum_interaction(int n_exc, double span, double d, double c_p, int p,
                                          const RelaxOptions& options = {});

/// E_int at each span with the excitation density of the first span held
/// fixed: the n-th span carries round((n_exc - 1) * span / spans[0]) + 1
/// excitations.
std::vector<ContinuumScalingRow> continuum_scaling_series(std::span<const double> spans, int n_exc,
                                                          double d, double c_p, int p,
                                                          const RelaxOptions& options = {});

void write_scaling_csv(std::ostream& os, std::span<const ContinuumScalingRow> rows);

}  // namespace dipolarbus
