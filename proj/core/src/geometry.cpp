// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "dipolarbus/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "dipolarbus/common.hpp"
#include "dipolarbus/random.hpp"

namespace dipolarbus {

namespace {

void check_common(int n_sites, double offset_d) {
  if (n_sites < 2) {
    throw ConfigError("geometry: n_sites must be >= 2, got " + std::to_string(n_sites));
  }
  if (!(offset_d > 0.0) || !std::isfinite(offset_d)) {
    throw ConfigError("geometry: offset_d must be > 0");
  }
}

void check_r_min(double r_min) {
  if (!(r_min >= 0.0 && r_min < 1.0)) {
    throw ConfigError("geometry: r_min must lie in [0, 1)");
  }
}

double min_gap(const std::vector<double>& sorted) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted.size(); ++i) gap = std::min(gap, sorted[i] - sorted[i - 1]);
  return gap;
}

}  // namespace

ChainGeometry ChainGeometry::from_positions(std::vector<double> positions, double offset_d,
                                            double r_min) {
  if (positions.empty()) throw ConfigError("geometry: at least one site required");
  if (!(offset_d > 0.0) || !std::isfinite(offset_d)) {
    throw ConfigError("geometry: offset_d must be > 0");
  }
  for (std::size_t i = 1; i < positions.size(); ++i) {
    if (!(positions[i] > positions[i - 1])) {
      throw ConfigError("geometry: positions must be strictly increasing");
    }
  }
  if (r_min > 0.0 && min_gap(positions) < r_min) {
    throw ConfigError("geometry: site separation below r_min");
  }
  ChainGeometry g;
  g.positions_ = std::move(positions);
  g.offset_d_ = offset_d;
  g.r_min_ = r_min;
  g.qubit_a_pos_ = g.positions_.front() - offset_d;
  g.qubit_b_pos_ = g.positions_.back() + offset_d;
  return g;
}

double ChainGeometry::min_separation() const noexcept { return min_gap(positions_); }

bool ChainGeometry::is_mirror_symmetric(double tol) const noexcept {
  const double centre = 0.5 * (positions_.front() + positions_.back());
  const std::size_t n = positions_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs((positions_[i] - centre) + (positions_[n - 1 - i] - centre)) > tol) return false;
  }
  return true;
}

std::uint64_t ChainGeometry::fingerprint() const noexcept {
  std::uint64_t h = splitmix64(positions_.size());
  for (double x : positions_) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(x));
  return splitmix64(h ^ std::bit_cast<std::uint64_t>(offset_d_));
}

ChainGeometry make_equidistant(int n_sites, double offset_d) {
  check_common(n_sites, offset_d);
  std::vector<double> pos(static_cast<std::size_t>(n_sites));
  for (int i = 0; i < n_sites; ++i) pos[static_cast<std::size_t>(i)] = i;
  return ChainGeometry::from_positions(std::move(pos), offset_d);
}

ChainGeometry make_disordered(int n_sites, double offset_d, std::uint64_t seed, double r_min,
                              int max_attempts) {
  check_common(n_sites, offset_d);
  check_r_min(r_min);
  std::mt19937_64 engine(seed);
  const double length = n_sites - 1;
  std::vector<double> pos(static_cast<std::size_t>(n_sites));
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    for (double& x : pos) x = length * uniform01(engine);
    std::sort(pos.begin(), pos.end());
    const double gap = min_gap(pos);
    if (gap > 0.0 && gap >= r_min) return ChainGeometry::from_positions(pos, offset_d, r_min);
  }
  throw ConfigError("geometry: no configuration with min separation >= r_min after " +
                    std::to_string(max_attempts) + " attempts (r_min too large for N)");
}

ChainGeometry make_jittered(int n_sites, double offset_d, std::uint64_t seed, double width,
                            double r_min, int max_attempts) {
  check_common(n_sites, offset_d);
  check_r_min(r_min);
  if (!(width >= 0.0)) throw ConfigError("geometry: jitter width must be >= 0");
  std::mt19937_64 engine(seed);
  std::vector<double> pos(static_cast<std::size_t>(n_sites));
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    for (int i = 0; i < n_sites; ++i) {
      pos[static_cast<std::size_t>(i)] = i + width * (uniform01(engine) - 0.5);
    }
    std::sort(pos.begin(), pos.end());
    const double gap = min_gap(pos);
    if (gap > 0.0 && gap >= r_min) return ChainGeometry::from_positions(pos, offset_d, r_min);
  }
  throw ConfigError("geometry: jitter resampling exhausted (r_min too large for width)");
}

std::string to_string(GeometryMode mode) {
  switch (mode) {
    case GeometryMode::equidistant: return "equidistant";
    case GeometryMode::disordered: return "disordered";
    case GeometryMode::jitter: return "jitter";
  }
  return "unknown";
}

GeometryMode parse_geometry_mode(const std::string& name) {
  if (name == "equidistant") return GeometryMode::equidistant;
  if (name == "disordered") return GeometryMode::disordered;
  if (name == "jitter") return GeometryMode::jitter;
  throw ConfigError("geometry: unknown mode '" + name + "'");
}

ChainGeometry make_geometry(const GeometrySpec& spec, std::uint64_t seed) {
  switch (spec.mode) {
    case GeometryMode::equidistant: return make_equidistant(spec.n_sites, spec.offset_d);
    case GeometryMode::disordered:
      return make_disordered(spec.n_sites, spec.offset_d, seed, spec.r_min);
    case GeometryMode::jitter:
      return make_jittered(spec.n_sites, spec.offset_d, seed, spec.jitter_width, spec.r_min);
  }
  throw ConfigError("geometry: unknown mode");
}

}  // namespace dipolarbus
