// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file error_model.hpp
 * @brief Analytic error budget of the gate: Landau-Zener leakage combined
 *        with size-enhanced decoherence, its optimisation over gate time and
 *        the bare dipolar-coupling baseline.
 *
 * All quantities are in internal units (hbar = 1, lengths in a, energies and
 * rates in the reference Rabi frequency) unless stated otherwise.
 */

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dipolarbus/basis.hpp"
#include "dipolarbus/common.hpp"

namespace dipolarbus {

/// Landau-Zener fit constants of the reference simulation.
inline constexpr double kReferenceFitB = 0.62;
inline constexpr double kReferenceFitC = 0.32;

struct ErrorBudget {
  double alpha0 = 1.0;     ///< c L Delta_G
  double l0 = 1.0;         ///< decoherence length scale L_0
  double gamma0 = 0.0;     ///< single-particle decoherence rate
  double delta_exp = 1.0;  ///< decoherence exponent
  double span_l = 1.0;     ///< qubit separation L
  double b = kReferenceFitB;
  double c = kReferenceFitC;

  /// gamma = gamma0 L / L0
  [[nodiscard]] double effective_rate() const noexcept { return gamma0 * span_l / l0; }
  void validate() const;
};

/// exp(-alpha0 t_g / L) + (gamma0 (L/L0) t_g)^delta
double total_error(const ErrorBudget& budget, double t_g);

struct OptimalGateTime {
  double t_g = 0.0;
  double eps = 0.0;
};

/// Closed-form optimum t_g = delta L log[L0 alpha0 / (L^2 gamma0)] / alpha0 and
/// eps = L^{2 delta} (delta gamma0 / (L0 alpha0) log[L0 alpha0 / (L^2 gamma0)])^delta.
/// Throws ConfigError when the logarithm's argument is <= 1.
OptimalGateTime optimal_gate_time(const ErrorBudget& budget);

/// Numerical minimum of total_error over t_g by golden-section search.
OptimalGateTime minimize_total_error(const ErrorBudget& budget);

/// F_T = 1/2 [1 - b e^{-c gap t0}] [1 + e^{-(gamma0 (L/L0)(2 t0 + pi/|e_int|))^delta}]
double combined_fidelity(const ErrorBudget& budget, double t0, double e_int, double gap);

struct T0Optimum {
  double t0 = 0.0;
  double f_max = 0.0;
  double t_g = 0.0;
  /// Fidelity still rising at the upper end of the search window.
  bool unbounded = false;
  /// Fidelity constant across the search window; t0 is then meaningless.
  bool flat = false;
};

/// Maximises combined_fidelity over t0 (log-grid bracket, then golden section).
T0Optimum optimize_t0(const ErrorBudget& budget, double e_int, double gap);

struct L0Estimate {
  double l0 = 0.0;
  double excitations = 0.0;  ///< sum_i <P_i^up>
  bool infinite = false;
};

/// L0 = L / sum_i <P_i^up> for a normalised state.
L0Estimate l0_from_density(std::span<const double> state, const BasisSet& basis, double span_l);
L0Estimate l0_from_density(std::span<const Complex> state, const BasisSet& basis, double span_l);

struct BareGate {
  double t_bare = 0.0;    ///< pi separation^p / C_p
  double error = 0.0;     ///< (gamma0 t_bare)^delta
  double fidelity = 1.0;  ///< 1/2 [1 + exp(-(gamma0 t_bare)^delta)]
};

/// Direct qubit-qubit gate through the bare C_p / r^p coupling.
BareGate bare_gate(double c_p, int p, double separation, double gamma0, double delta_exp);

/// Physical parameter set; SI values with angular frequencies in rad/s and
/// rates in 1/s, plus bus properties measured with the simulator at
/// n_sites / offset_d (internal units).
struct Preset {
  std::string name;
  double omega0_si = 0.0;
  double delta0_si = 0.0;
  double c3_over_a3_si = 0.0;  ///< C_3 / (hbar a^3)
  double a_si = 0.0;
  double gamma0_si = 0.0;
  double delta_exp = 1.0;
  double span_l_si = 0.0;
  int n_sites = 34;
  double offset_d = 3.0;
  double measured_gap = 0.0;
  double measured_e_int = 0.0;
  double measured_l0 = 0.0;
  std::string notes;
};

const Preset& preset(std::string_view name);
std::vector<std::string> preset_names();

/// Conversion between SI and internal units (hbar = 1, energy unit omega_ref,
/// length unit a).
struct UnitSystem {
  double omega_ref_si = 1.0;
  double a_si = 1.0;

  [[nodiscard]] double rate_to_internal(double si) const noexcept { return si / omega_ref_si; }
  [[nodiscard]] double rate_to_si(double internal) const noexcept { return internal * omega_ref_si; }
  [[nodiscard]] double time_to_internal(double si) const noexcept { return si * omega_ref_si; }
  [[nodiscard]] double time_to_si(double internal) const noexcept { return internal / omega_ref_si; }
  [[nodiscard]] double length_to_internal(double si) const noexcept { return si / a_si; }
  [[nodiscard]] double length_to_si(double internal) const noexcept { return internal * a_si; }
};

UnitSystem units_of(const Preset& preset);

/// Budget for a preset: measured gap / E_int / L0 in internal units, gamma0
/// converted to internal units.
ErrorBudget budget_from_preset(const Preset& preset);

}  // namespace dipolarbus
