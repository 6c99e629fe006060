// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dipolarbus/common.hpp"
#include "dipolarbus/geometry.hpp"
#include "generators.hpp"

using namespace dipolarbus;

TEST_CASE("equidistant chain places sites on the integers") {
  const auto g = make_equidistant(4, 3.0);
  CHECK(std::vector<double>(g.positions().begin(), g.positions().end()) == std::vector<double>{0, 1, 2, 3});
  CHECK(g.qubit_a_pos() == -3.0);
  CHECK(g.qubit_b_pos() == 6.0);
  CHECK(g.span_L() == 9.0);
  CHECK(make_equidistant(34, 3.0).span_L() == 39.0);
  const auto minimal = make_equidistant(2, 1.0);
  CHECK(minimal.span_L() == 3.0);
  CHECK(minimal.is_mirror_symmetric());
}

TEST_CASE("equidistant chain rejects bad sizes and offsets") {
  CHECK_THROWS_AS(make_equidistant(1, 3.0), ConfigError);
  CHECK_THROWS_AS(make_equidistant(4, 0.0), ConfigError);
  CHECK_THROWS_AS(make_equidistant(4, -1.0), ConfigError);
}

TEST_CASE("explicit positions are validated") {
  CHECK_THROWS_AS(ChainGeometry::from_positions({}, 1.0), ConfigError);
  CHECK_THROWS_AS(ChainGeometry::from_positions({0.0, 0.0, 1.0}, 1.0), ConfigError);
  CHECK_THROWS_AS(ChainGeometry::from_positions({1.0, 0.0}, 1.0), ConfigError);
  CHECK_THROWS_AS(ChainGeometry::from_positions({0.0, 0.05, 1.0}, 1.0, 0.1), ConfigError);
  const auto g = ChainGeometry::from_positions({0.0, 0.5, 3.0}, 2.0);
  CHECK(g.min_separation() == doctest::Approx(0.5));
  CHECK(g.qubit_a_pos() == -2.0);
  CHECK(g.qubit_b_pos() == 5.0);
  CHECK_FALSE(g.is_mirror_symmetric());
}

TEST_CASE("disordered sampling is a pure function of the seed") {
  const auto a = make_disordered(15, 3.0, 42);
  const auto b = make_disordered(15, 3.0, 42);
  const auto c = make_disordered(15, 3.0, 43);
  CHECK(a == b);
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK_FALSE(a == c);
  CHECK(a.fingerprint() != c.fingerprint());
}

TEST_CASE("disordered sampling respects its support and floor") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto two = make_disordered(2, 1.0, seed, 0.0);
    CHECK(two.position(0) >= 0.0);
    CHECK(two.position(1) <= 1.0);
    CHECK(two.qubit_a_pos() == doctest::Approx(two.position(0) - 1.0));
    const auto g = make_disordered(12, 3.0, seed, 0.1);
    CHECK(g.min_separation() >= 0.1);
    CHECK(g.position(0) >= 0.0);
    CHECK(g.position(11) <= 11.0);
  }
}

TEST_CASE("disordered sampling gives up when the floor is unreachable") {
  CHECK_THROWS_AS(make_disordered(30, 3.0, 1, 0.95, 50), ConfigError);
  CHECK_THROWS_AS(make_disordered(5, 3.0, 1, 1.0), ConfigError);
}

TEST_CASE("mean nearest-neighbour spacing matches uniform order statistics") {
  // For N i.i.d. uniform points on [0, N-1] the expected gap between
  // consecutive order statistics is (N-1)/(N+1).
  const int n = 15;
  const int samples = 10000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto g = make_disordered(n, 3.0, static_cast<std::uint64_t>(s), 0.0);
    const double mean_gap = (g.position(n - 1) - g.position(0)) / (n - 1);
    sum += mean_gap;
    sum_sq += mean_gap * mean_gap;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum_sq / samples - mean * mean) / samples);
  const double expected = static_cast<double>(n - 1) / (n + 1);
  CHECK(std::abs(mean - expected) < 4.0 * se);
}

TEST_CASE("jittered chains stay within the jitter window") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = make_jittered(10, 3.0, seed, 0.4);
    for (int i = 0; i < 10; ++i) CHECK(std::abs(g.position(i) - i) <= 0.2 + 1e-12);
    CHECK(g.min_separation() >= 0.1);
  }
  const auto flat = make_jittered(6, 3.0, 7, 0.0);
  CHECK(std::equal(flat.positions().begin(), flat.positions().end(), make_equidistant(6, 3.0).positions().begin()));
}

TEST_CASE("geometry settings dispatch on the mode") {
  GeometrySpec spec;
  spec.n_sites = 8;
  spec.mode = GeometryMode::equidistant;
  CHECK(make_geometry(spec, 1) == make_geometry(spec, 2));
  spec.mode = GeometryMode::disordered;
  CHECK(make_geometry(spec, 1) == make_disordered(8, spec.offset_d, 1, spec.r_min));
  CHECK(parse_geometry_mode(to_string(GeometryMode::jitter)) == GeometryMode::jitter);
  CHECK_THROWS_AS(parse_geometry_mode("lattice"), ConfigError);
}

TEST_CASE("property: every generated geometry satisfies the chain invariants") {
  testing::Gen gen(2026);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = gen.integer(2, 20);
    const double d = gen.uniform(0.1, 5.0);
    const auto g = gen.coin() ? make_disordered(n, d, gen.seed(), gen.uniform(0.0, 0.3))
                              : make_jittered(n, d, gen.seed(), gen.uniform(0.0, 0.8));
    for (int i = 0; i + 1 < n; ++i) CHECK(g.position(i + 1) > g.position(i));
    CHECK(g.min_separation() >= g.r_min());
    CHECK(g.qubit_a_pos() == doctest::Approx(g.position(0) - d));
    CHECK(g.qubit_b_pos() == doctest::Approx(g.position(n - 1) + d));
    CHECK(g.span_L() > 0.0);
  }
}
