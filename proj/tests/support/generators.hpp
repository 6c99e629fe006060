// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

// Small seeded generators for property tests and brute-force reference
// implementations that share no code with the library.

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dipolarbus/geometry.hpp"
#include "dipolarbus/hamiltonian.hpp"

namespace dipolarbus::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::uint64_t seed() { return rng_(); }
  bool coin() { return integer(0, 1) == 1; }

  QubitSector sector() { return kAllSectors[static_cast<std::size_t>(integer(0, 3))]; }

  /// Sorted positions with gaps in [min_gap, max_gap].
  ChainGeometry geometry(int n, double min_gap = 0.3, double max_gap = 2.0) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 1; i < n; ++i) x[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i - 1)] + uniform(min_gap, max_gap);
    return ChainGeometry::from_positions(std::move(x), uniform(0.5, 4.0));
  }

  DriveParams drive() {
    DriveParams d;
    d.omega0 = uniform(0.2, 3.0);
    d.delta0 = uniform(0.5, 4.0);
    d.t0 = uniform(5.0, 50.0);
    d.c_p = uniform(1.0, 200.0);
    d.p = coin() ? 3 : 6;
    return d;
  }

  std::vector<std::complex<double>> state(std::size_t dim) {
    std::vector<std::complex<double>> v(dim);
    double norm = 0.0;
    for (auto& z : v) {
      z = {uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
      norm += std::norm(z);
    }
    for (auto& z : v) z /= std::sqrt(norm);
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

/// Dense Hamiltonian over all 2^N bitmasks written directly from the model
/// definition: sigma^z = +1 for an excited site, flips couple with Omega/2.
inline Eigen::MatrixXd reference_hamiltonian(const ChainGeometry& g, QubitSector sector, double omega,
                                             double delta, const DriveParams& params, int sign = 1) {
  const int n = g.n_sites();
  const std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t c = 0; c < dim; ++c) {
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      const bool up_i = (c >> i) & 1U;
      e += -0.5 * delta * (up_i ? 1.0 : -1.0);
      if (!up_i) continue;
      const double xi = g.position(i);
      if (sector.alpha == Spin::up) e += params.c_p / std::pow(xi - g.qubit_a_pos(), params.p);
      if (sector.beta == Spin::up) e += params.c_p / std::pow(g.qubit_b_pos() - xi, params.p);
      for (int j = i + 1; j < n; ++j) {
        if ((c >> j) & 1U) e += params.c_p / std::pow(g.position(j) - xi, params.p);
      }
    }
    const auto k = static_cast<Eigen::Index>(c);
    h(k, k) = sign * e;
    for (int i = 0; i < n; ++i) {
      const auto other = static_cast<Eigen::Index>(c ^ (std::size_t{1} << i));
      h(k, other) = sign * 0.5 * omega;
    }
  }
  return h;
}

/// Bitmasks of an N-site chain that satisfy the truncation rule, by brute force.
inline std::vector<std::uint64_t> brute_force_configs(const ChainGeometry& g, int n_max, double r_cut) {
  std::vector<std::uint64_t> out;
  const int n = g.n_sites();
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); ++c) {
    if (std::popcount(c) > n_max) continue;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = i + 1; j < n && ok; ++j) {
        if (((c >> i) & 1U) && ((c >> j) & 1U) && std::abs(g.position(j) - g.position(i)) < r_cut) ok = false;
      }
    }
    if (ok) out.push_back(c);
  }
  return out;
}

}  // namespace dipolarbus::testing
