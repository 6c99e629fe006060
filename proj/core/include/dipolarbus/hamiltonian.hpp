// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hamiltonian.hpp
 * @brief Driven power-law spin-chain Hamiltonian in one boundary-qubit sector.
 *
 *   H = -(Delta/2) sum_i s_i + (Omega/2) sum_i X_i
 *       + sum_{i<j} C_p / |r_i - r_j|^p  n_i n_j  + sum_i v_i n_i
 *
 * with s_i = +1 for an excited site, n_i = (1 + s_i)/2 and v_i the potential
 * exerted by whichever boundary qubits are excited. Units: hbar = 1, lengths
 * in a, energies in the reference Rabi frequency.
 */

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dipolarbus/basis.hpp"
#include "dipolarbus/common.hpp"
#include "dipolarbus/geometry.hpp"

namespace dipolarbus {

struct DriveParams {
  double omega0 = 1.0;  ///< Rabi amplitude
  double delta0 = 2.3;  ///< detuning scale
  double t0 = 100.0;    ///< ramp duration
  double c_p = 100.0;   ///< interaction coefficient
  int p = 3;            ///< power-law exponent, 3 or 6

  void validate() const;
};

enum class Spin : std::uint8_t { down = 0, up = 1 };

struct QubitSector {
  Spin alpha = Spin::down;
  Spin beta = Spin::down;

  /// Position in the canonical ordering {dd, du, ud, uu}.
  [[nodiscard]] constexpr int index() const noexcept {
    return 2 * static_cast<int>(alpha) + static_cast<int>(beta);
  }
  friend constexpr bool operator==(QubitSector, QubitSector) = default;
};

inline constexpr QubitSector kSectorDD{Spin::down, Spin::down};
inline constexpr QubitSector kSectorDU{Spin::down, Spin::up};
inline constexpr QubitSector kSectorUD{Spin::up, Spin::down};
inline constexpr QubitSector kSectorUU{Spin::up, Spin::up};
inline constexpr std::array<QubitSector, 4> kAllSectors{kSectorDD, kSectorDU, kSectorUD, kSectorUU};

std::string to_string(QubitSector sector);
QubitSector parse_sector(const std::string& name);

/// Omega(t) = Omega_0 sin^2( (8 t/t0) / (1 + 16 (t/t0)^2) ).
double ramp_omega(double t, const DriveParams& params);
/// Delta(t) = Delta_0 (1 - 5 exp(-4 t/t0)).
double ramp_delta(double t, const DriveParams& params);

/// C_p / r^p between two points.
double pair_interaction(double r, const DriveParams& params);

/// Per-site energy v_i from the excited boundary qubits of a sector.
std::vector<double> boundary_potential(const ChainGeometry& geometry, QubitSector sector,
                                       const DriveParams& params);

/// Real symmetric operator: a diagonal plus a shared single-flip amplitude.
class SparseHamiltonian {
 public:
  SparseHamiltonian(BasisSet basis, std::vector<double> diagonal, double flip_amplitude);

  [[nodiscard]] std::size_t dim() const noexcept { return diagonal_.size(); }
  [[nodiscard]] std::span<const double> diagonal() const noexcept { return diagonal_; }
  [[nodiscard]] double flip_amplitude() const noexcept { return flip_amplitude_; }
  [[nodiscard]] const BasisSet& basis() const noexcept { return basis_; }

  /// y = H x
  void apply(std::span<const double> x, std::span<double> y) const;
  void apply(std::span<const Complex> x, std::span<Complex> y) const;

  /// Gershgorin bound on the spectral radius.
  [[nodiscard]] double norm_estimate() const noexcept;

  [[nodiscard]] Eigen::MatrixXd to_dense() const;

 private:
  template <typename T>
  void apply_impl(std::span<const T> x, std::span<T> y) const;

  BasisSet basis_;
  std::vector<double> diagonal_;
  double flip_amplitude_;
};

/// Precomputes the time-independent diagonal pieces of one sector so that the
/// Hamiltonian at any (Omega, Delta) costs O(dim) to assemble.
class SectorHamiltonian {
 public:
  SectorHamiltonian(BasisSet basis, const ChainGeometry& geometry, QubitSector sector,
                    const DriveParams& params);

  [[nodiscard]] SparseHamiltonian at(double omega, double delta, int sign = +1) const;
  /// Ramp profiles evaluated at time t.
  [[nodiscard]] SparseHamiltonian at_time(double t, int sign = +1) const;

  [[nodiscard]] const BasisSet& basis() const noexcept { return basis_; }
  [[nodiscard]] QubitSector sector() const noexcept { return sector_; }
  [[nodiscard]] const DriveParams& params() const noexcept { return params_; }

  /// Interaction plus boundary energy of every configuration (the Omega = Delta = 0 diagonal).
  [[nodiscard]] std::span<const double> static_energy() const noexcept { return static_energy_; }
  /// Sum of sigma^z eigenvalues of every configuration.
  [[nodiscard]] std::span<const int> sz_sum() const noexcept { return sz_sum_; }

 private:
  BasisSet basis_;
  QubitSector sector_;
  DriveParams params_;
  std::vector<double> static_energy_;
  std::vector<int> sz_sum_;
};

/// One-shot assembly; prefer SectorHamiltonian inside time loops.
SparseHamiltonian assemble(const BasisSet& basis, const ChainGeometry& geometry,
                           QubitSector sector, double omega, double delta,
                           const DriveParams& params, int sign = +1);

}  // namespace dipolarbus
