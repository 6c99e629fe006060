// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <set>

#include "dipolarbus/basis.hpp"
#include "dipolarbus/common.hpp"
#include "generators.hpp"

using namespace dipolarbus;

TEST_CASE("full basis holds every bitmask in ascending order") {
  const auto b = BasisSet::build(make_equidistant(3, 1.0), FullPolicy{});
  REQUIRE(b.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(b.config(i) == i);
  CHECK(b.vacuum_index() == 0);
  CHECK(b.is_full());
}

TEST_CASE("single-excitation truncation") {
  const auto b = BasisSet::build(make_equidistant(4, 1.0), TruncatedPolicy{1, 0.0});
  CHECK(b.size() == 5);
  CHECK(b.vacuum_index() == 0);
  CHECK_FALSE(b.is_full());
}

TEST_CASE("blockade truncation matches a brute-force filter") {
  const auto g = make_equidistant(6, 1.0);
  const auto b = BasisSet::build(g, TruncatedPolicy{6, 2.5});
  const auto expected = testing::brute_force_configs(g, 6, 2.5);
  REQUIRE(b.size() == expected.size());
  CHECK(std::equal(expected.begin(), expected.end(), b.configs().begin()));
  CHECK(count_configs(g, TruncatedPolicy{6, 2.5}) == expected.size());
}

TEST_CASE("basis requests above the cap are rejected") {
  const auto g = make_equidistant(12, 1.0);
  CHECK_THROWS_AS(BasisSet::build(g, FullPolicy{}, 1000), ConfigError);
  CHECK_THROWS_AS(BasisSet::build(g, TruncatedPolicy{13, 0.0}), ConfigError);
  CHECK_THROWS_AS(BasisSet::build(g, TruncatedPolicy{2, -1.0}), ConfigError);
}

TEST_CASE("flip table lists exactly the single-flip neighbours inside the basis") {
  const auto g = make_equidistant(7, 1.0);
  const auto b = BasisSet::build(g, TruncatedPolicy{3, 1.5});
  for (std::size_t k = 0; k < b.size(); ++k) {
    std::set<std::uint64_t> listed;
    for (auto col : b.flips().row(k)) {
      const auto other = b.config(col);
      CHECK(std::popcount(other ^ b.config(k)) == 1);
      listed.insert(other);
    }
    std::set<std::uint64_t> expected;
    for (int i = 0; i < 7; ++i) {
      const auto other = b.config(k) ^ (std::uint64_t{1} << i);
      if (b.index_of(other)) expected.insert(other);
    }
    CHECK(listed == expected);
  }
}

TEST_CASE("property: index map inverts the config list and policies nest") {
  testing::Gen gen(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = gen.integer(2, 11);
    const auto g = gen.geometry(n);
    const int n_max = gen.integer(0, n);
    const double r_cut = gen.uniform(0.0, 3.0);
    const auto tight = BasisSet::build(g, TruncatedPolicy{n_max, r_cut});
    for (std::size_t i = 0; i < tight.size(); ++i) CHECK(tight.index_of(tight.config(i)) == i);
    CHECK(std::is_sorted(tight.configs().begin(), tight.configs().end()));
    CHECK(tight.config(tight.vacuum_index()) == 0);
    CHECK(tight.size() == count_configs(g, TruncatedPolicy{n_max, r_cut}));
    CHECK(tight.size() == testing::brute_force_configs(g, n_max, r_cut).size());

    const auto loose = BasisSet::build(g, TruncatedPolicy{std::min(n, n_max + 1), 0.5 * r_cut});
    for (auto c : tight.configs()) CHECK(loose.index_of(c).has_value());
    const auto full = BasisSet::build(g, FullPolicy{});
    CHECK(full.size() == (std::size_t{1} << n));
  }
}

TEST_CASE("configs outside the basis have no index") {
  const auto b = BasisSet::build(make_equidistant(5, 1.0), TruncatedPolicy{1, 0.0});
  CHECK_FALSE(b.index_of(0b11).has_value());
  CHECK_FALSE(b.index_of(std::uint64_t{1} << 10).has_value());
}
