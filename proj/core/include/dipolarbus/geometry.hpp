// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file geometry.hpp
 * @brief One-dimensional particle configurations for the quantum bus.
 *
 * All lengths are in units of the mean interparticle spacing a. The bus
 * sites occupy positions[0] < ... < positions[N-1]; the two boundary qubits
 * sit a distance d outside either end.
 */

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dipolarbus {

class ChainGeometry {
 public:
  /// Validates and wraps an explicit set of sorted site positions (at least one).
  static ChainGeometry from_positions(std::vector<double> positions, double offset_d,
                                      double r_min = 0.0);

  [[nodiscard]] int n_sites() const noexcept { return static_cast<int>(positions_.size()); }
  [[nodiscard]] std::span<const double> positions() const noexcept { return positions_; }
  [[nodiscard]] double position(int i) const { return positions_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] double qubit_a_pos() const noexcept { return qubit_a_pos_; }
  [[nodiscard]] double qubit_b_pos() const noexcept { return qubit_b_pos_; }
  [[nodiscard]] double offset_d() const noexcept { return offset_d_; }
  [[nodiscard]] double span_L() const noexcept { return qubit_b_pos_ - qubit_a_pos_; }
  [[nodiscard]] double r_min() const noexcept { return r_min_; }
  [[nodiscard]] double min_separation() const noexcept;

  /// True when reflecting about the chain centre maps the sites onto themselves.
  [[nodiscard]] bool is_mirror_symmetric(double tol = 1e-12) const noexcept;

  /// Order-sensitive 64-bit digest of the positions; used to pair bases with geometries.
  [[nodiscard]] std::uint64_t fingerprint() const noexcept;

  friend bool operator==(const ChainGeometry&, const ChainGeometry&) = default;

 private:
  ChainGeometry() = default;

  std::vector<double> positions_;
  double qubit_a_pos_ = 0.0;
  double qubit_b_pos_ = 0.0;
  double offset_d_ = 0.0;
  double r_min_ = 0.0;
};

/// Sites at 0, 1, ..., N-1.
ChainGeometry make_equidistant(int n_sites, double offset_d);

/// N i.i.d. uniform points on [0, N-1], sorted; the whole draw is repeated
/// until every neighbouring gap is at least r_min.
ChainGeometry make_disordered(int n_sites, double offset_d, std::uint64_t seed,
                              double r_min = 0.1, int max_attempts = 100000);

/// Lattice sites displaced by independent uniform jitter in [-width/2, width/2].
ChainGeometry make_jittered(int n_sites, double offset_d, std::uint64_t seed, double width,
                            double r_min = 0.1, int max_attempts = 100000);

enum class GeometryMode { equidistant, disordered, jitter };

std::string to_string(GeometryMode mode);
GeometryMode parse_geometry_mode(const std::string& name);

/// Everything needed to regenerate a geometry for a given seed.
struct GeometrySpec {
  GeometryMode mode = GeometryMode::equidistant;
  int n_sites = 10;
  double offset_d = 3.0;
  double r_min = 0.1;
  double jitter_width = 0.5;
};

ChainGeometry make_geometry(const GeometrySpec& spec, std::uint64_t seed);

}  // namespace dipolarbus
