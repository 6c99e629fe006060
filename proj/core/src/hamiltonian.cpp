// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "dipolarbus/hamiltonian.hpp"

#include <bit>
#include <cmath>

namespace dipolarbus {

void DriveParams::validate() const {
  if (!(omega0 > 0.0)) throw ConfigError("drive: omega0 must be > 0");
  if (!(delta0 > 0.0)) throw ConfigError("drive: delta0 must be > 0");
  if (!(t0 > 0.0)) throw ConfigError("drive: t0 must be > 0");
  if (!(c_p > 0.0)) throw ConfigError("drive: c_p must be > 0");
  if (p != 3 && p != 6) throw ConfigError("drive: p must be 3 or 6");
}

std::string to_string(QubitSector sector) {
  std::string s;
  s += sector.alpha == Spin::up ? 'u' : 'd';
  s += sector.beta == Spin::up ? 'u' : 'd';
  return s;
}

QubitSector parse_sector(const std::string& name) {
  for (QubitSector s : kAllSectors) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown qubit sector '" + name + "'");
}

double ramp_omega(double t, const DriveParams& params) {
  const double s = t / params.t0;
  const double arg = 8.0 * s / (1.0 + 16.0 * s * s);
  const double sn = std::sin(arg);
  return params.omega0 * sn * sn;
}

double ramp_delta(double t, const DriveParams& params) {
  return params.delta0 * (1.0 - 5.0 * std::exp(-4.0 * t / params.t0));
}

double pair_interaction(double r, const DriveParams& params) {
  return params.c_p / std::pow(std::abs(r), params.p);
}

std::vector<double> boundary_potential(const ChainGeometry& geometry, QubitSector sector,
                                       const DriveParams& params) {
  std::vector<double> v(static_cast<std::size_t>(geometry.n_sites()), 0.0);
  for (int i = 0; i < geometry.n_sites(); ++i) {
    const double r = geometry.position(i);
    double e = 0.0;
    if (sector.alpha == Spin::up) e += pair_interaction(geometry.qubit_a_pos() - r, params);
    if (sector.beta == Spin::up) e += pair_interaction(geometry.qubit_b_pos() - r, params);
    v[static_cast<std::size_t>(i)] = e;
  }
  return v;
}

SparseHamiltonian::SparseHamiltonian(BasisSet basis, std::vector<double> diagonal,
                                     double flip_amplitude)
    : basis_(std::move(basis)), diagonal_(std::move(diagonal)), flip_amplitude_(flip_amplitude) {
  if (diagonal_.size() != basis_.size()) {
    throw Error("hamiltonian: diagonal length does not match basis dimension");
  }
}

template <typename T>
void SparseHamiltonian::apply_impl(std::span<const T> x, std::span<T> y) const {
  const auto& flips = basis_.flips();
  const std::size_t n = diagonal_.size();
  const double amp = flip_amplitude_;
  for (std::size_t k = 0; k < n; ++k) {
    T acc{};
    for (std::uint32_t j : flips.row(k)) acc += x[j];
    y[k] = diagonal_[k] * x[k] + amp * acc;
  }
}

void SparseHamiltonian::apply(std::span<const double> x, std::span<double> y) const {
  apply_impl<double>(x, y);
}

void SparseHamiltonian::apply(std::span<const Complex> x, std::span<Complex> y) const {
  apply_impl<Complex>(x, y);
}

double SparseHamiltonian::norm_estimate() const noexcept {
  const auto& flips = basis_.flips();
  double best = 0.0;
  for (std::size_t k = 0; k < diagonal_.size(); ++k) {
    const double row = std::abs(diagonal_[k]) +
                       std::abs(flip_amplitude_) * static_cast<double>(flips.row(k).size());
    best = std::max(best, row);
  }
  return best;
}

Eigen::MatrixXd SparseHamiltonian::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const auto& flips = basis_.flips();
  for (Eigen::Index k = 0; k < n; ++k) {
    m(k, k) = diagonal_[static_cast<std::size_t>(k)];
    for (std::uint32_t j : flips.row(static_cast<std::size_t>(k))) m(k, j) = flip_amplitude_;
  }
  return m;
}

SectorHamiltonian::SectorHamiltonian(BasisSet basis, const ChainGeometry& geometry,
                                     QubitSector sector, const DriveParams& params)
    : basis_(std::move(basis)), sector_(sector), params_(params) {
  params_.validate();
  if (basis_.n_sites() != geometry.n_sites() ||
      basis_.geometry_fingerprint() != geometry.fingerprint()) {
    throw Error("hamiltonian: basis was built on a different geometry");
  }
  const int n = geometry.n_sites();
  const auto pos = geometry.positions();
  const auto v = boundary_potential(geometry, sector, params);

  std::vector<double> pair(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      pair[static_cast<std::size_t>(i * n + j)] =
          pair_interaction(pos[static_cast<std::size_t>(j)] - pos[static_cast<std::size_t>(i)],
                           params);
    }
  }

  const auto configs = basis_.configs();
  static_energy_.resize(configs.size());
  sz_sum_.resize(configs.size());
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const SpinConfig c = configs[k];
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!((c >> i) & 1U)) continue;
      for (int j = i + 1; j < n; ++j) {
        if ((c >> j) & 1U) e += pair[static_cast<std::size_t>(i * n + j)];
      }
    }
    for (int i = 0; i < n; ++i) {
      if ((c >> i) & 1U) e += v[static_cast<std::size_t>(i)];
    }
    static_energy_[k] = e;
    sz_sum_[k] = 2 * std::popcount(c) - n;
  }
}

SparseHamiltonian SectorHamiltonian::at(double omega, double delta, int sign) const {
  if (sign != 1 && sign != -1) throw Error("hamiltonian: sign must be +1 or -1");
  std::vector<double> diag(static_energy_.size());
  const double s = sign;
  for (std::size_t k = 0; k < diag.size(); ++k) {
    diag[k] = s * (-0.5 * delta * sz_sum_[k] + static_energy_[k]);
  }
  return SparseHamiltonian(basis_, std::move(diag), s * 0.5 * omega);
}

SparseHamiltonian SectorHamiltonian::at_time(double t, int sign) const {
  return at(ramp_omega(t, params_), ramp_delta(t, params_), sign);
}

SparseHamiltonian assemble(const BasisSet& basis, const ChainGeometry& geometry,
                           QubitSector sector, double omega, double delta,
                           const DriveParams& params, int sign) {
  return SectorHamiltonian(basis, geometry, sector, params).at(omega, delta, sign);
}

}  // namespace dipolarbus
